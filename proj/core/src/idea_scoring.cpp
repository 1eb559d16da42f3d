#include "idealize/idea_scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "idealize/error.hpp"
#include "json.hpp"

namespace idealize::scoring {
namespace {

double divisor(const WeightedKeywordSet& weights, ScaleMode scale) {
  return scale == ScaleMode::Literal ? static_cast<double>(weights.nkeywords()) : 1.0;
}

// Values of `s` on `grid`, nearest point within `tolerance` seconds.
std::vector<double> align(const trends::TrendSeries& s, const std::vector<UnixSeconds>& grid,
                          std::int64_t tolerance) {
  std::vector<double> out(grid.size());
  if (s.points.size() == grid.size() &&
      std::equal(grid.begin(), grid.end(), s.points.begin(),
                 [](UnixSeconds t, const trends::TrendPoint& p) { return t == p.time; })) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = s.points[i].interest;
    return out;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto t = grid[i];
    auto it = std::lower_bound(s.points.begin(), s.points.end(), t,
                               [](const trends::TrendPoint& p, UnixSeconds v) { return p.time < v; });
    const trends::TrendPoint* best = nullptr;
    std::int64_t best_gap = 0;
    if (it != s.points.end()) {
      best = &*it;
      best_gap = it->time - t;
    }
    if (it != s.points.begin()) {
      const auto& prev = *std::prev(it);
      // ties go to the earlier point
      if (!best || t - prev.time <= best_gap) {
        best = &prev;
        best_gap = t - prev.time;
      }
    }
    if (!best || best_gap > tolerance) {
      throw Error(ErrorKind::GridMismatch, "series '" + s.keyword + "' has no point near " +
                                               format_iso8601(t));
    }
    out[i] = best->interest;
  }
  return out;
}

}  // namespace

CapitalTable::CapitalTable(std::map<std::string, CountryGeography> rows)
    : rows_(rows.begin(), rows.end()) {}

CapitalTable CapitalTable::parse(std::string_view text) {
  auto check = [](double lat, double lon, const std::string& what) {
    if (!(lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0)) {
      throw Error(ErrorKind::ConfigError, "coordinates out of range for " + what);
    }
    return LatLon{lat, lon};
  };
  try {
    const auto doc = nlohmann::json::parse(text);
    std::map<std::string, CountryGeography> rows;
    for (const auto& [geo, body] : doc.items()) {
      CountryGeography g;
      const auto& cap = body.at("capital");
      g.capital_name = cap.at("name").get<std::string>();
      g.capital_region = cap.value("region", "");
      g.capital = check(cap.at("lat").get<double>(), cap.at("lon").get<double>(), geo + " capital");
      for (const auto& [code, c] : body.at("regions").items()) {
        g.regions.emplace(code, check(c.at("lat").get<double>(), c.at("lon").get<double>(), geo + "-" + code));
      }
      rows.emplace(geo, std::move(g));
    }
    return CapitalTable(std::move(rows));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("capitals table: ") + e.what());
  }
}

CapitalTable CapitalTable::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const CountryGeography* CapitalTable::find(std::string_view geo) const {
  auto it = rows_.find(geo);
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<std::string> CapitalTable::geos() const {
  std::vector<std::string> out;
  for (const auto& [geo, g] : rows_) out.push_back(geo);
  return out;
}

double haversine_km(LatLon a, LatLon b) noexcept {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * rad;
  const double dlon = (b.lon - a.lon) * rad;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(a.lat * rad) * std::cos(b.lat * rad) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

WeightedKeywordSet normalized_keyword_weights(const std::vector<rank::RankedKeyword>& ranked) {
  if (ranked.empty()) {
    throw Error(ErrorKind::EmptyKeywordSet, "no keywords to weight");
  }
  double total = 0.0;
  for (const auto& k : ranked) {
    if (!(k.weight > 0.0) || !std::isfinite(k.weight)) {
      throw Error(ErrorKind::NonPositiveWeight, "keyword '" + k.text + "' has weight " + format_number(k.weight));
    }
    total += k.weight;
  }
  WeightedKeywordSet set;
  set.entries.reserve(ranked.size());
  for (const auto& k : ranked) set.entries.push_back({k.text, k.weight, k.weight / total});
  return set;
}

IdeaTrendSeries average_trend_per_idea(const WeightedKeywordSet& weights,
                                       const std::map<std::string, trends::TrendSeries>& series,
                                       ScaleMode scale) {
  if (weights.entries.empty()) {
    throw Error(ErrorKind::EmptyKeywordSet, "no keywords to aggregate");
  }
  std::vector<const trends::TrendSeries*> ordered;
  for (const auto& e : weights.entries) {
    auto it = series.find(e.keyword);
    if (it == series.end()) throw Error(ErrorKind::MissingSeries, "no series for '" + e.keyword + "'");
    ordered.push_back(&it->second);
  }

  std::vector<UnixSeconds> grid;
  for (const auto& p : ordered.front()->points) grid.push_back(p.time);
  std::int64_t min_step = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto step = grid[i] - grid[i - 1];
    if (min_step == 0 || step < min_step) min_step = step;
  }
  const std::int64_t tolerance = min_step / 2;

  std::vector<std::vector<double>> aligned;
  aligned.reserve(ordered.size());
  for (const auto* s : ordered) aligned.push_back(align(*s, grid, tolerance));

  const double n = divisor(weights, scale);
  IdeaTrendSeries out;
  out.points.reserve(grid.size());
  for (std::size_t t = 0; t < grid.size(); ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < weights.entries.size(); ++k) sum += weights.entries[k].nkw * aligned[k][t];
    out.points.push_back({grid[t], sum / n});
  }
  return out;
}

RegionStrengthMap regional_idea_strength(const WeightedKeywordSet& weights,
                                         const std::map<std::string, trends::RegionInterestTable>& tables,
                                         ScaleMode scale) {
  if (weights.entries.empty()) {
    throw Error(ErrorKind::EmptyKeywordSet, "no keywords to aggregate");
  }
  std::vector<const trends::RegionInterestTable*> ordered;
  for (const auto& e : weights.entries) {
    auto it = tables.find(e.keyword);
    if (it == tables.end()) throw Error(ErrorKind::MissingTable, "no regional table for '" + e.keyword + "'");
    ordered.push_back(&it->second);
  }
  RegionStrengthMap map;
  for (const auto* t : ordered) {
    for (const auto& [code, v] : t->rows) map.rows.try_emplace(code);
  }
  const double n = divisor(weights, scale);
  for (auto& [code, row] : map.rows) {
    double sum = 0.0;
    for (std::size_t k = 0; k < ordered.size(); ++k) {
      auto it = ordered[k]->rows.find(code);
      sum += weights.entries[k].nkw * (it == ordered[k]->rows.end() ? 0.0 : it->second);
    }
    row.strength = sum / n;
  }
  assign_buckets(map);
  return map;
}

void assign_buckets(RegionStrengthMap& map) {
  if (map.rows.empty()) return;
  auto [lo, hi] = std::minmax_element(map.rows.begin(), map.rows.end(), [](const auto& a, const auto& b) {
    return a.second.strength < b.second.strength;
  });
  const double min = lo->second.strength;
  const double range = hi->second.strength - min;
  for (auto& [code, row] : map.rows) {
    if (!(range > 0.0)) {
      row.bucket = 0;
      continue;
    }
    const double level = std::floor((row.strength - min) / range * (kBucketCount - 1));
    row.bucket = std::clamp(static_cast<int>(level), 0, kBucketCount - 1);
  }
}

CapitalDistance capital_distance(const std::string& region_code, const std::string& geo,
                                 const CapitalTable& capitals) {
  const auto* country = capitals.find(geo);
  if (!country) throw Error(ErrorKind::UnknownGeo, "no capital data for geo '" + geo + "'");
  auto it = country->regions.find(region_code);
  if (it == country->regions.end()) {
    throw Error(ErrorKind::UnknownRegion, "no centroid for region '" + region_code + "' in '" + geo + "'");
  }
  double farthest = 0.0;
  for (const auto& [code, c] : country->regions) farthest = std::max(farthest, haversine_km(c, country->capital));
  const double km = haversine_km(it->second, country->capital);
  return {km, farthest > 0.0 ? km / farthest : 0.0};
}

void attach_capital_distances(RegionStrengthMap& map, const std::string& geo, const CapitalTable& capitals) {
  const auto* country = capitals.find(geo);
  if (!country) return;
  for (auto& [code, row] : map.rows) {
    if (!country->regions.count(code)) continue;
    const auto d = capital_distance(code, geo, capitals);
    row.capital_km = d.km;
    row.relative_distance = d.relative;
  }
}

}  // namespace idealize::scoring
