#pragma once

// Idea strength from TextRank weights and per-keyword interest.
//
//   nkw_k       = weight_k / sum_j weight_j
//   strength(t) = sum_k nkw_k * interest_k(t) / nkeywords
//
// The outer division by nkeywords is kept as written (values top out at
// 100 / nkeywords); ScaleMode::Normalized drops it for a 0..100 scale.
// Regional strength applies the same formula to regional interest.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idealize/graph_rank.hpp"
#include "idealize/trends.hpp"

namespace idealize::scoring {

struct WeightedKeyword {
  std::string keyword;
  double raw_weight = 0.0;
  double nkw = 0.0;
};

struct WeightedKeywordSet {
  std::vector<WeightedKeyword> entries;  // ranked order

  std::size_t nkeywords() const noexcept { return entries.size(); }
};

enum class ScaleMode { Literal, Normalized };

struct IdeaPoint {
  UnixSeconds time = 0;
  double strength = 0.0;
};

struct IdeaTrendSeries {
  std::vector<IdeaPoint> points;
};

inline constexpr int kBucketCount = 9;

struct RegionStrength {
  double strength = 0.0;
  int bucket = 0;  // 0 (lightest) .. 8 (darkest)
  std::optional<double> capital_km;
  std::optional<double> relative_distance;
};

struct RegionStrengthMap {
  std::map<std::string, RegionStrength> rows;
};

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

struct CountryGeography {
  std::string capital_name;
  std::string capital_region;  // may be empty
  LatLon capital;
  std::map<std::string, LatLon> regions;
};

/// Capitals and region centroids per country code.
class CapitalTable {
 public:
  CapitalTable() = default;
  explicit CapitalTable(std::map<std::string, CountryGeography> rows);

  /// `{"US": {"capital": {"name", "lat", "lon"}, "regions": {code: {"lat", "lon"}}}}`.
  static CapitalTable load(const std::filesystem::path& path);
  static CapitalTable parse(std::string_view json);

  const CountryGeography* find(std::string_view geo) const;
  std::vector<std::string> geos() const;

 private:
  std::map<std::string, CountryGeography, std::less<>> rows_;
};

struct CapitalDistance {
  double km = 0.0;
  double relative = 0.0;  // km / farthest region of the same country
};

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance by the haversine formula.
double haversine_km(LatLon a, LatLon b) noexcept;

/// Throws Error(EmptyKeywordSet) or Error(NonPositiveWeight).
WeightedKeywordSet normalized_keyword_weights(const std::vector<rank::RankedKeyword>& ranked);

/// Series of other keywords are aligned onto the first keyword's timestamps by
/// nearest point, accepted within half of that grid's smallest step.
/// Throws Error(MissingSeries) or Error(GridMismatch).
IdeaTrendSeries average_trend_per_idea(const WeightedKeywordSet& weights,
                                       const std::map<std::string, trends::TrendSeries>& series,
                                       ScaleMode scale = ScaleMode::Literal);

/// Regions missing from a table count as 0. Buckets are assigned.
/// Throws Error(MissingTable).
RegionStrengthMap regional_idea_strength(const WeightedKeywordSet& weights,
                                         const std::map<std::string, trends::RegionInterestTable>& tables,
                                         ScaleMode scale = ScaleMode::Literal);

/// bucket = floor(8 * (s - min) / (max - min)): nine levels over [min, max],
/// with level 8 reached only at the maximum. Constant maps are all level 0.
void assign_buckets(RegionStrengthMap& map);

/// Throws Error(UnknownGeo) or Error(UnknownRegion).
CapitalDistance capital_distance(const std::string& region_code, const std::string& geo,
                                 const CapitalTable& capitals);

/// Fills capital_km/relative_distance for every row the table knows about.
void attach_capital_distances(RegionStrengthMap& map, const std::string& geo,
                              const CapitalTable& capitals);

}  // namespace idealize::scoring
