#include "idealize/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "idealize/error.hpp"
#include "json.hpp"

namespace idealize::service {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void invalid(std::string_view field, std::string_view why) {
  throw Error(ErrorKind::ValidationError, std::string(field) + ": " + std::string(why));
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string line;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) line += ',';
    line += csv_field(f);
    first = false;
  }
  line += "\r\n";
  return line;
}

ordered_json points_json(const trends::TrendSeries& s) {
  auto arr = ordered_json::array();
  for (const auto& p : s.points) arr.push_back({format_iso8601(p.time), p.interest});
  return arr;
}

template <typename T>
T get_field(const json& body, const char* field) {
  try {
    return body.at(field).get<T>();
  } catch (const json::exception&) {
    invalid(field, "missing or wrong type");
  }
}

}  // namespace

void validate(const AnalysisRequest& r) {
  if (is_blank(r.text)) invalid("text", "must not be empty");
  if (!(r.geo.empty() || (r.geo.size() == 2 && std::isupper(static_cast<unsigned char>(r.geo[0])) &&
                          std::isupper(static_cast<unsigned char>(r.geo[1]))))) {
    invalid("geo", "must be an ISO 3166-1 alpha-2 code or empty for worldwide");
  }
  if (!trends::parse_context(r.context)) invalid("context", "must be one of web, news, images, froogle, youtube");
  if (!trends::Timeframe::from_label(r.timeframe_label)) invalid("timeframe_label", "unknown timeframe");
  if (r.max_keywords < 1 || r.max_keywords > 50) invalid("max_keywords", "must be in 1..50");
  const auto& o = r.options;
  if (o.window && (*o.window < 2 || *o.window > 10)) invalid("options.window", "must be in 2..10");
  if (o.ratio && !(*o.ratio > 0.0 && *o.ratio <= 1.0)) invalid("options.ratio", "must be in (0,1]");
  if (o.damping && !(*o.damping > 0.0 && *o.damping < 1.0)) invalid("options.damping", "must be in (0,1)");
  if (o.tolerance && !(*o.tolerance > 0.0)) invalid("options.tolerance", "must be > 0");
  if (o.max_iterations && (*o.max_iterations < 1 || *o.max_iterations > 10000)) {
    invalid("options.max_iterations", "must be in 1..10000");
  }
}

AnalysisRequest parse_request(std::string_view text) {
  json body;
  try {
    body = json::parse(text);
  } catch (const json::exception& e) {
    invalid("body", std::string("not valid JSON: ") + e.what());
  }
  if (!body.is_object()) invalid("body", "must be a JSON object");
  static const std::set<std::string> known = {"text", "geo", "context", "timeframe_label", "max_keywords",
                                              "options"};
  for (const auto& [key, value] : body.items()) {
    if (!known.count(key)) invalid(key, "unknown field");
  }
  AnalysisRequest r;
  r.text = get_field<std::string>(body, "text");
  r.geo = get_field<std::string>(body, "geo");
  r.context = get_field<std::string>(body, "context");
  r.timeframe_label = get_field<std::string>(body, "timeframe_label");
  if (body.contains("max_keywords")) {
    const auto& mk = body["max_keywords"];
    if (!mk.is_number_integer()) invalid("max_keywords", "must be an integer");
    r.max_keywords = mk.get<int>();
  }
  if (body.contains("options")) {
    const auto& o = body["options"];
    if (!o.is_object()) invalid("options", "must be an object");
    for (const auto& [key, v] : o.items()) {
      const std::string field = "options." + key;
      if (key == "window" || key == "max_iterations") {
        if (!v.is_number_integer()) invalid(field, "must be an integer");
        (key == "window" ? r.options.window : r.options.max_iterations) = v.get<int>();
      } else if (key == "ratio" || key == "damping" || key == "tolerance") {
        if (!v.is_number()) invalid(field, "must be a number");
        auto& slot = key == "ratio" ? r.options.ratio : key == "damping" ? r.options.damping : r.options.tolerance;
        slot = v.get<double>();
      } else if (key == "directed" || key == "normalized_scale") {
        if (!v.is_boolean()) invalid(field, "must be true or false");
        (key == "directed" ? r.options.directed : r.options.normalized_scale) = v.get<bool>();
      } else {
        invalid(field, "unknown option");
      }
    }
  }
  validate(r);
  return r;
}

std::string request_to_json(const AnalysisRequest& r) {
  ordered_json doc;
  doc["text"] = r.text;
  doc["geo"] = r.geo;
  doc["context"] = r.context;
  doc["timeframe_label"] = r.timeframe_label;
  doc["max_keywords"] = r.max_keywords;
  ordered_json o = ordered_json::object();
  if (r.options.window) o["window"] = *r.options.window;
  if (r.options.ratio) o["ratio"] = *r.options.ratio;
  if (r.options.damping) o["damping"] = *r.options.damping;
  if (r.options.tolerance) o["tolerance"] = *r.options.tolerance;
  if (r.options.max_iterations) o["max_iterations"] = *r.options.max_iterations;
  if (r.options.directed) o["directed"] = *r.options.directed;
  if (r.options.normalized_scale) o["normalized_scale"] = *r.options.normalized_scale;
  if (!o.empty()) doc["options"] = o;
  return doc.dump();
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  return std::nullopt;
}

std::string serialize_report(const AnalysisReport& report) {
  ordered_json doc;
  doc["schema_version"] = report.schema_version;

  const auto& m = report.metadata;
  ordered_json meta;
  meta["geo"] = m.geo;
  meta["context"] = m.context;
  meta["timeframe_label"] = m.timeframe_label;
  meta["wire_token"] = m.wire_token;
  meta["mode"] = m.mode;
  meta["max_keywords"] = m.max_keywords;
  meta["normalized_scale"] = m.normalized_scale;
  meta["extraction"] = {{"window", m.window},       {"ratio", m.ratio},
                        {"damping", m.damping},     {"tolerance", m.tolerance},
                        {"max_iterations", m.max_iterations}, {"directed", m.directed}};
  meta["candidate_count"] = m.candidate_count;
  meta["pagerank"] = {{"converged", m.converged}, {"iterations", m.iterations}};
  meta["partial"] = m.partial;
  meta["failed_keywords"] = m.failed_keywords;
  if (m.extract_ms || m.trends_ms || m.scoring_ms) {
    meta["timings_ms"] = {{"extract", m.extract_ms.value_or(0.0)},
                          {"trends", m.trends_ms.value_or(0.0)},
                          {"scoring", m.scoring_ms.value_or(0.0)}};
  }
  doc["metadata"] = std::move(meta);

  auto& ranked = doc["ranked_keywords"] = ordered_json::array();
  for (const auto& k : report.ranked_keywords) ranked.push_back({{"text", k.text}, {"weight", k.weight}});

  auto& kws = doc["keywords"] = ordered_json::array();
  for (const auto& e : report.keywords.entries) {
    kws.push_back({{"keyword", e.keyword}, {"raw_weight", e.raw_weight}, {"nkw", e.nkw}});
  }
  doc["nkeywords"] = report.keywords.nkeywords();

  auto& series = doc["per_keyword_series"] = ordered_json::array();
  for (const auto& s : report.per_keyword_series) {
    series.push_back({{"keyword", s.keyword}, {"points", points_json(s)}});
  }
  auto& idea = doc["idea_series"] = ordered_json::array();
  for (const auto& p : report.idea_series.points) idea.push_back({format_iso8601(p.time), p.strength});

  auto& regions = doc["region_map"] = ordered_json::array();
  for (const auto& [code, row] : report.region_map.rows) {
    ordered_json r;
    r["region_code"] = code;
    r["strength"] = row.strength;
    r["bucket"] = row.bucket;
    r["hex_color"] = report.color_for(row.bucket);
    r["capital_distance_km"] = row.capital_km ? ordered_json(*row.capital_km) : ordered_json(nullptr);
    r["relative_capital_distance"] =
        row.relative_distance ? ordered_json(*row.relative_distance) : ordered_json(nullptr);
    regions.push_back(std::move(r));
  }
  doc["color_ramp"] = report.color_ramp;
  return doc.dump(2) + "\n";
}

std::string emit_trend_chart_data(const AnalysisReport& report, Format format) {
  struct Row {
    std::string time, name, value;
  };
  std::vector<Row> rows;
  for (const auto& s : report.per_keyword_series) {
    for (const auto& p : s.points) rows.push_back({format_iso8601(p.time), s.keyword, format_number(p.interest)});
  }
  for (const auto& p : report.idea_series.points) {
    rows.push_back({format_iso8601(p.time), std::string(kIdeaSeriesName), format_number(p.strength)});
  }
  if (format == Format::Csv) {
    std::string out = csv_row({"timestamp", "series_name", "value"});
    for (const auto& r : rows) out += csv_row({r.time, r.name, r.value});
    return out;
  }
  ordered_json doc;
  doc["columns"] = {"timestamp", "series_name", "value"};
  auto& arr = doc["rows"] = ordered_json::array();
  for (const auto& s : report.per_keyword_series) {
    for (const auto& p : s.points) arr.push_back({format_iso8601(p.time), s.keyword, p.interest});
  }
  for (const auto& p : report.idea_series.points) {
    arr.push_back({format_iso8601(p.time), kIdeaSeriesName, p.strength});
  }
  return doc.dump(1) + "\n";
}

std::string emit_choropleth(const AnalysisReport& report, Format format) {
  if (format == Format::Csv) {
    std::string out = csv_row({"region_code", "strength", "bucket", "hex_color", "relative_capital_distance"});
    for (const auto& [code, row] : report.region_map.rows) {
      out += csv_row({code, format_number(row.strength), std::to_string(row.bucket), report.color_for(row.bucket),
                      row.relative_distance ? format_number(*row.relative_distance) : std::string()});
    }
    return out;
  }
  ordered_json doc;
  doc["color_ramp"] = report.color_ramp;
  auto& arr = doc["rows"] = ordered_json::array();
  for (const auto& [code, row] : report.region_map.rows) {
    ordered_json r;
    r["region_code"] = code;
    r["strength"] = row.strength;
    r["bucket"] = row.bucket;
    r["hex_color"] = report.color_for(row.bucket);
    r["relative_capital_distance"] =
        row.relative_distance ? ordered_json(*row.relative_distance) : ordered_json(nullptr);
    arr.push_back(std::move(r));
  }
  return doc.dump(1) + "\n";
}

std::shared_ptr<trends::TrendsClient> make_trends_client(const ServiceConfig& config) {
  config.validate();
  std::shared_ptr<trends::TrendsSource> source;
  if (config.mode == "fixture") {
    source = std::make_shared<trends::FixtureSource>(config.resolved_fixtures_dir());
  } else {
    std::shared_ptr<trends::HttpTransport> transport;
    if (!config.wire_replay_dir.empty()) {
      transport = std::make_shared<trends::ReplayTransport>(config.wire_replay_dir);
    } else {
      transport = std::make_shared<trends::HttplibTransport>(config.endpoints.base_url,
                                                            config.endpoints.cookie_path);
      if (!config.wire_record_dir.empty()) {
        transport = std::make_shared<trends::RecordingTransport>(transport, config.wire_record_dir);
      }
    }
    auto limiter = std::make_shared<trends::RateLimiter>(
        config.rate_limit,
        config.rate_limit_policy == "reject" ? trends::RateLimiter::Policy::Reject
                                             : trends::RateLimiter::Policy::Wait);
    source = std::make_shared<trends::WireSource>(transport, limiter, config.endpoints);
  }
  trends::ClientOptions options;
  const auto ttl = std::chrono::seconds(static_cast<std::int64_t>(config.cache_ttl_hours * 3600.0));
  options.memory_ttl = ttl;
  if (!config.cache_dir.empty()) options.file_cache = std::make_shared<trends::FileCache>(config.cache_dir, ttl);
  return std::make_shared<trends::TrendsClient>(source, options);
}

Analyzer::Analyzer(ServiceConfig config) : Analyzer(config, make_trends_client(config)) {}

Analyzer::Analyzer(ServiceConfig config, std::shared_ptr<trends::TrendsClient> client)
    : config_(std::move(config)), client_(std::move(client)) {
  config_.validate();
  if (!client_) throw Error(ErrorKind::InvalidArgument, "analyzer needs a trends client");
  stoplist_ = std::make_shared<const text::Stoplist>(text::Stoplist::load(config_.resolved_stoplist()));
  tagger_ = std::make_shared<const text::LexiconTagger>(text::TagLexicon::load(config_.resolved_lexicon()));
  capitals_ = scoring::CapitalTable::load(config_.resolved_capitals());
}

rank::ExtractionConfig Analyzer::extraction_config(const AnalysisRequest& r) const {
  rank::ExtractionConfig c;
  c.window = r.options.window.value_or(config_.window);
  c.ratio = r.options.ratio.value_or(config_.ratio);
  c.damping = r.options.damping.value_or(config_.damping);
  c.tolerance = r.options.tolerance.value_or(config_.tolerance);
  c.max_iterations = r.options.max_iterations.value_or(config_.max_iterations);
  c.directed = r.options.directed.value_or(config_.directed);
  c.stoplist = stoplist_;
  c.tagger = tagger_;
  return c;
}

rank::ExtractionResult Analyzer::extract(const AnalysisRequest& request) const {
  if (is_blank(request.text)) invalid("text", "must not be empty");
  try {
    return rank::extract_detailed(request.text, extraction_config(request));
  } catch (const Error& e) {
    throw Error(ErrorKind::ExtractionError, std::string(to_string(e.kind())) + ": " + e.detail());
  }
}

AnalysisReport Analyzer::analyze(const AnalysisRequest& request) const {
  validate(request);
  const auto context = *trends::parse_context(request.context);
  const auto timeframe = *trends::Timeframe::from_label(request.timeframe_label);
  const auto scale = request.options.normalized_scale.value_or(config_.normalized_scale)
                         ? scoring::ScaleMode::Normalized
                         : scoring::ScaleMode::Literal;
  const auto xc = extraction_config(request);

  AnalysisReport report;
  report.color_ramp = config_.color_ramp;
  auto& m = report.metadata;
  m.geo = request.geo;
  m.context = request.context;
  m.timeframe_label = request.timeframe_label;
  m.wire_token = std::string(timeframe.wire_token());
  m.mode = std::string(client_->mode());
  m.max_keywords = request.max_keywords;
  m.normalized_scale = scale == scoring::ScaleMode::Normalized;
  m.window = xc.window;
  m.ratio = xc.ratio;
  m.damping = xc.damping;
  m.tolerance = xc.tolerance;
  m.max_iterations = xc.max_iterations;
  m.directed = xc.directed;
  m.partial = config_.partial;

  auto started = std::chrono::steady_clock::now();
  const auto extraction = extract(request);
  m.candidate_count = extraction.candidate_count;
  m.converged = extraction.converged;
  m.iterations = extraction.iterations;
  report.ranked_keywords = extraction.keywords;
  if (config_.include_timings) m.extract_ms = elapsed_ms(started);

  started = std::chrono::steady_clock::now();
  const auto top_count = std::min(report.ranked_keywords.size(), static_cast<std::size_t>(request.max_keywords));
  std::vector<trends::QueryKey> keys;
  for (std::size_t i = 0; i < top_count; ++i) {
    keys.push_back({report.ranked_keywords[i].text, request.geo, context, timeframe});
  }

  auto fail = [&](const std::string& keyword, const Error& e) {
    if (!config_.partial) {
      throw Error(ErrorKind::TrendsError, "keyword '" + keyword + "': " + e.what());
    }
    m.failed_keywords.push_back(keyword);
  };

  auto outcomes = client_->fetch_interest_over_time_many(keys);
  std::vector<rank::RankedKeyword> fetched;
  std::map<std::string, trends::TrendSeries> series;
  std::map<std::string, trends::RegionInterestTable> tables;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (outcomes[i].error) {
      fail(keys[i].keyword, *outcomes[i].error);
      continue;
    }
    try {
      tables.emplace(keys[i].keyword, client_->fetch_interest_by_region(keys[i]));
    } catch (const Error& e) {
      fail(keys[i].keyword, e);
      continue;
    }
    series.emplace(keys[i].keyword, std::move(*outcomes[i].series));
    fetched.push_back(report.ranked_keywords[i]);
  }
  if (fetched.empty()) {
    throw Error(ErrorKind::TrendsError, "no trend data for any keyword");
  }
  if (config_.include_timings) m.trends_ms = elapsed_ms(started);

  started = std::chrono::steady_clock::now();
  // Weights renormalized over the fetched subset so they still sum to 1.
  report.keywords = scoring::normalized_keyword_weights(fetched);
  for (const auto& e : report.keywords.entries) report.per_keyword_series.push_back(series.at(e.keyword));
  report.idea_series = scoring::average_trend_per_idea(report.keywords, series, scale);
  report.region_map = scoring::regional_idea_strength(report.keywords, tables, scale);
  scoring::attach_capital_distances(report.region_map, request.geo, capitals_);
  if (config_.include_timings) m.scoring_ms = elapsed_ms(started);
  return report;
}

std::string Analyzer::describe() const {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  auto& contexts = doc["contexts"] = ordered_json::array();
  for (auto c : trends::kAllContexts) contexts.push_back(std::string(trends::to_string(c)));
  auto& timeframes = doc["timeframes"] = ordered_json::array();
  for (auto label : trends::kAllTimeframes) {
    const trends::Timeframe tf{label};
    timeframes.push_back({{"label", std::string(tf.label_text())}, {"wire_token", std::string(tf.wire_token())}});
  }
  auto& geos = doc["geos"] = ordered_json::array();
  geos.push_back({{"code", ""}, {"name", "Worldwide"}});
  for (const auto& g : capitals_.geos()) geos.push_back({{"code", g}, {"name", g}});
  doc["mode"] = std::string(client_->mode());
  doc["max_keywords"] = config_.max_keywords;
  doc["color_ramp"] = config_.color_ramp;
  return doc.dump(2) + "\n";
}

}  // namespace idealize::service
