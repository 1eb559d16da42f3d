#pragma once

// Search-interest data model. Every series and regional table is normalized
// against its own maximum over the query window:
//
//   interest_t = raw_t / max(raw over [t - x, t)) * 100
//
// so values express relative concentration, never absolute volume.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idealize/util.hpp"

namespace idealize::trends {

enum class Context { Web, News, Images, Froogle, Youtube };

inline constexpr std::array<Context, 5> kAllContexts = {
    Context::Web, Context::News, Context::Images, Context::Froogle, Context::Youtube};

std::string_view to_string(Context c) noexcept;
std::optional<Context> parse_context(std::string_view name);
/// Value of the upstream `property` parameter ("" for web search).
std::string_view wire_property(Context c) noexcept;

enum class TimeframeLabel {
  LastHour,
  LastFourHours,
  LastDay,
  LastSevenDays,
  Past30Days,
  Past90Days,
  Past12Months,
  LastFiveYears,
  SinceBeginning,
};

inline constexpr std::array<TimeframeLabel, 9> kAllTimeframes = {
    TimeframeLabel::LastHour,     TimeframeLabel::LastFourHours, TimeframeLabel::LastDay,
    TimeframeLabel::LastSevenDays, TimeframeLabel::Past30Days,   TimeframeLabel::Past90Days,
    TimeframeLabel::Past12Months, TimeframeLabel::LastFiveYears, TimeframeLabel::SinceBeginning};

/// A lookback window [end - length, end).
struct Timeframe {
  TimeframeLabel label = TimeframeLabel::Past12Months;

  std::string_view label_text() const noexcept;
  std::string_view wire_token() const noexcept;
  /// Sampling step upstream uses for this window, in seconds.
  std::int64_t resolution_seconds() const noexcept;
  /// Half-open span ending at `now`. The 2004 window starts at 2004-01-01.
  std::pair<UnixSeconds, UnixSeconds> span(UnixSeconds now) const noexcept;

  static std::optional<Timeframe> from_label(std::string_view text);
  static std::optional<Timeframe> from_wire_token(std::string_view token);

  bool operator==(const Timeframe&) const = default;
};

struct QueryKey {
  std::string keyword;
  std::string geo;  // ISO 3166-1 alpha-2, or "" for worldwide
  Context context = Context::Web;
  Timeframe timeframe;

  /// Throws Error(InvalidArgument) when the keyword is empty/untrimmed or the geo is malformed.
  void validate() const;
  /// Newline-joined fields; input to stable_hash().
  std::string canonical() const;
  /// 16 hex digits, platform independent. Names fixture and cache files.
  std::string stable_hash() const;

  bool operator==(const QueryKey&) const = default;
};

struct RawPoint {
  UnixSeconds time = 0;
  double value = 0.0;
};

/// Unnormalized counts. Exists only in fixtures and tests.
struct RawSeries {
  std::vector<RawPoint> points;
};

struct TrendPoint {
  UnixSeconds time = 0;
  double interest = 0.0;

  bool operator==(const TrendPoint&) const = default;
};

struct TrendSeries {
  std::string keyword;
  std::vector<TrendPoint> points;

  bool operator==(const TrendSeries&) const = default;
};

struct RegionInterestTable {
  std::string keyword;
  std::map<std::string, double> rows;

  bool operator==(const RegionInterestTable&) const = default;
};

/// Throws Error(EmptySeries) on empty input, Error(FixtureInvalid) on
/// negative/non-finite values or non-increasing timestamps.
TrendSeries normalize_series(const RawSeries& raw, std::string keyword = {});
RegionInterestTable normalize_regions(const std::map<std::string, double>& raw,
                                      std::string keyword = {});

/// Checks values in [0,100] with max exactly 100 whenever any value is positive.
bool is_normalized(const std::vector<double>& values);
void validate_normalized(const TrendSeries& series);
void validate_normalized(const RegionInterestTable& table);

/// Order-preserving chunks of at most `max_per_request` (upstream accepts 5 keywords per request).
std::vector<std::vector<std::string>> batch_keywords(const std::vector<std::string>& keywords,
                                                     std::size_t max_per_request = 5);

}  // namespace idealize::trends
