#pragma once

// End-to-end idea analysis: extract -> top keywords -> trends -> scoring,
// plus the report, trend-chart and choropleth documents built from it.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idealize/config.hpp"
#include "idealize/idea_scoring.hpp"
#include "idealize/trends_client.hpp"

namespace idealize::service {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kIdeaSeriesName = "__idea__";

struct RequestOptions {
  std::optional<int> window;
  std::optional<double> ratio;
  std::optional<double> damping;
  std::optional<double> tolerance;
  std::optional<int> max_iterations;
  std::optional<bool> directed;
  std::optional<bool> normalized_scale;
};

struct AnalysisRequest {
  std::string text;
  std::string geo = "US";
  std::string context = "web";
  std::string timeframe_label = "Past 12 months";
  int max_keywords = 5;
  RequestOptions options;
};

/// Throws Error(ValidationError) naming the first bad field.
void validate(const AnalysisRequest& request);
/// Parses and validates the JSON body of `POST /api/v1/analyze`.
AnalysisRequest parse_request(std::string_view json);
std::string request_to_json(const AnalysisRequest& request);

struct ReportMetadata {
  std::string geo;
  std::string context;
  std::string timeframe_label;
  std::string wire_token;
  std::string mode;
  int max_keywords = 5;
  bool normalized_scale = false;
  int window = 2;
  double ratio = 1.0 / 3.0;
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iterations = 100;
  bool directed = true;
  std::size_t candidate_count = 0;
  bool converged = false;
  int iterations = 0;
  bool partial = false;
  std::vector<std::string> failed_keywords;
  std::optional<double> extract_ms, trends_ms, scoring_ms;
};

struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::vector<rank::RankedKeyword> ranked_keywords;  // full extraction output
  scoring::WeightedKeywordSet keywords;              // fetched subset, renormalized
  std::vector<trends::TrendSeries> per_keyword_series;  // same order as keywords
  scoring::IdeaTrendSeries idea_series;
  scoring::RegionStrengthMap region_map;
  std::vector<std::string> color_ramp;
  ReportMetadata metadata;

  const std::string& color_for(int bucket) const { return color_ramp.at(static_cast<std::size_t>(bucket)); }
};

enum class Format { Json, Csv };
std::optional<Format> parse_format(std::string_view name);

/// Deterministic JSON rendering (fixed key order, shortest round-trip numbers).
std::string serialize_report(const AnalysisReport& report);

/// Long format (timestamp, series_name, value): each keyword series, then `__idea__`.
std::string emit_trend_chart_data(const AnalysisReport& report, Format format);
/// (region_code, strength, bucket, hex_color, relative_capital_distance) by region code.
std::string emit_choropleth(const AnalysisReport& report, Format format);

class Analyzer {
 public:
  /// Builds the trends client described by the config (fixture or wire).
  explicit Analyzer(ServiceConfig config);
  Analyzer(ServiceConfig config, std::shared_ptr<trends::TrendsClient> client);

  /// Throws Error with kind ValidationError, ExtractionError or TrendsError
  /// (detail names the keyword); anything else is an internal failure.
  AnalysisReport analyze(const AnalysisRequest& request) const;

  /// Extraction alone, with the request's option overrides.
  rank::ExtractionResult extract(const AnalysisRequest& request) const;

  const ServiceConfig& config() const noexcept { return config_; }
  const scoring::CapitalTable& capitals() const noexcept { return capitals_; }
  trends::TrendsClient& client() const noexcept { return *client_; }

  /// Document served at `GET /api/v1/config`.
  std::string describe() const;

 private:
  rank::ExtractionConfig extraction_config(const AnalysisRequest& request) const;

  ServiceConfig config_;
  std::shared_ptr<const text::Stoplist> stoplist_;
  std::shared_ptr<const text::Tagger> tagger_;
  scoring::CapitalTable capitals_;
  std::shared_ptr<trends::TrendsClient> client_;
};

std::shared_ptr<trends::TrendsClient> make_trends_client(const ServiceConfig& config);

}  // namespace idealize::service
