#include "idealize/trends_source.hpp"

#include "idealize/error.hpp"
#include "json.hpp"

namespace idealize::trends {

using nlohmann::ordered_json;

std::vector<TrendSeries> TrendsSource::interest_over_time_batch(const std::vector<QueryKey>& keys) {
  std::vector<TrendSeries> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(interest_over_time(k));
  return out;
}

std::string fixture_to_json(const FixtureRecord& record) {
  ordered_json doc;
  doc["keyword"] = record.key.keyword;
  doc["geo"] = record.key.geo;
  doc["context"] = std::string(to_string(record.key.context));
  doc["timeframe_label"] = std::string(record.key.timeframe.label_text());
  if (record.raw_series) {
    auto& arr = doc["raw_series"] = ordered_json::array();
    for (const auto& p : record.raw_series->points) arr.push_back({format_iso8601(p.time), p.value});
  }
  if (record.raw_regions) {
    auto& obj = doc["raw_regions"] = ordered_json::object();
    for (const auto& [code, v] : *record.raw_regions) obj[code] = v;
  }
  if (record.series) {
    auto& arr = doc["series"] = ordered_json::array();
    for (const auto& p : record.series->points) arr.push_back({format_iso8601(p.time), p.interest});
  }
  if (record.regions) {
    auto& obj = doc["regions"] = ordered_json::object();
    for (const auto& [code, v] : record.regions->rows) obj[code] = v;
  }
  return doc.dump(1) + "\n";
}

FixtureRecord fixture_from_json(std::string_view json) {
  try {
    const auto doc = ordered_json::parse(json);
    FixtureRecord rec;
    rec.key.keyword = doc.at("keyword").get<std::string>();
    rec.key.geo = doc.value("geo", "");
    const auto ctx = parse_context(doc.at("context").get<std::string>());
    const auto tf = Timeframe::from_label(doc.at("timeframe_label").get<std::string>());
    if (!ctx || !tf) {
      throw Error(ErrorKind::FixtureInvalid, "unknown context or timeframe label");
    }
    rec.key.context = *ctx;
    rec.key.timeframe = *tf;

    auto points = [](const ordered_json& arr) {
      std::vector<std::pair<UnixSeconds, double>> pts;
      for (const auto& p : arr) {
        pts.emplace_back(parse_iso8601(p.at(0).get<std::string>()), p.at(1).get<double>());
      }
      return pts;
    };
    auto table = [](const ordered_json& obj) {
      std::map<std::string, double> rows;
      for (const auto& [code, v] : obj.items()) rows.emplace(code, v.get<double>());
      return rows;
    };
    if (doc.contains("raw_series")) {
      RawSeries raw;
      for (auto [t, v] : points(doc["raw_series"])) raw.points.push_back({t, v});
      rec.raw_series = std::move(raw);
    }
    if (doc.contains("raw_regions")) rec.raw_regions = table(doc["raw_regions"]);
    if (doc.contains("series")) {
      TrendSeries s{rec.key.keyword, {}};
      for (auto [t, v] : points(doc["series"])) s.points.push_back({t, v});
      rec.series = std::move(s);
    }
    if (doc.contains("regions")) rec.regions = RegionInterestTable{rec.key.keyword, table(doc["regions"])};
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::FixtureInvalid, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::FixtureInvalid) throw;
    throw Error(ErrorKind::FixtureInvalid, e.detail());
  }
}

std::filesystem::path fixture_path(const std::filesystem::path& dir, const QueryKey& key) {
  return dir / (key.stable_hash() + ".json");
}

FixtureRecord FixtureSource::load(const QueryKey& key) {
  key.validate();
  const auto path = fixture_path(dir_, key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw Error(ErrorKind::FixtureMissing, "no fixture for " + key.canonical() + " (" + path.string() + ")");
  }
  count_read();
  auto rec = fixture_from_json(read_file(path));
  if (!(rec.key == key)) {
    throw Error(ErrorKind::FixtureInvalid, path.string() + " describes a different query");
  }
  return rec;
}

TrendSeries FixtureSource::interest_over_time(const QueryKey& key) {
  auto rec = load(key);
  if (rec.raw_series) return normalize_series(*rec.raw_series, key.keyword);
  if (rec.series) {
    validate_normalized(*rec.series);
    return std::move(*rec.series);
  }
  throw Error(ErrorKind::FixtureMissing, "fixture for '" + key.keyword + "' has no series");
}

RegionInterestTable FixtureSource::interest_by_region(const QueryKey& key) {
  auto rec = load(key);
  if (rec.raw_regions) return normalize_regions(*rec.raw_regions, key.keyword);
  if (rec.regions) {
    validate_normalized(*rec.regions);
    return std::move(*rec.regions);
  }
  throw Error(ErrorKind::FixtureMissing, "fixture for '" + key.keyword + "' has no regional table");
}

}  // namespace idealize::trends
