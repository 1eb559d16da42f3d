#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "idealize/graph_rank.hpp"
#include "idealize/wire.hpp"

namespace idealize::service {

/// Nine-step sequential ramp, lightest first (ColorBrewer "Blues").
inline const std::vector<std::string> kDefaultColorRamp = {
    "#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6",
    "#4292c6", "#2171b5", "#08519c", "#08306b"};

struct ServiceConfig {
  // extraction
  int window = 2;
  double ratio = 1.0 / 3.0;
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iterations = 100;
  bool directed = true;
  // scoring
  bool normalized_scale = false;
  int max_keywords = 5;
  bool partial = false;
  bool include_timings = false;
  std::vector<std::string> color_ramp = kDefaultColorRamp;
  // trends
  std::string mode = "fixture";  // fixture | wire
  std::filesystem::path data_dir;      // empty: default_data_dir()
  std::filesystem::path fixtures_dir;  // empty: <data_dir>/fixtures
  std::filesystem::path stoplist;      // empty: <data_dir>/stopwords_en.txt
  std::filesystem::path lexicon;       // empty: <data_dir>/lexicon_en.tsv
  std::filesystem::path capitals;      // empty: <data_dir>/capitals.json
  std::filesystem::path cache_dir;     // empty: no file cache
  double cache_ttl_hours = 24.0;
  double rate_limit = 1.0;  // wire requests per second
  std::string rate_limit_policy = "wait";  // wait | reject
  std::filesystem::path wire_record_dir;
  std::filesystem::path wire_replay_dir;
  trends::WireEndpoints endpoints;

  std::filesystem::path resolved_data_dir() const;
  std::filesystem::path resolved_fixtures_dir() const;
  std::filesystem::path resolved_stoplist() const;
  std::filesystem::path resolved_lexicon() const;
  std::filesystem::path resolved_capitals() const;

  /// Throws Error(ConfigError) naming the offending key.
  void validate() const;
};

/// Applies one `key=value` setting. Throws Error(ConfigError) on unknown keys or bad values.
void apply_setting(ServiceConfig& config, std::string_view key, std::string_view value);

/// Parses a config document: a JSON object, or `key=value` lines with `#` comments.
ServiceConfig parse_config(std::string_view text, ServiceConfig base = {});
ServiceConfig load_config(const std::filesystem::path& path);

}  // namespace idealize::service
