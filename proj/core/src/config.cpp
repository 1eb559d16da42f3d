#include "idealize/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "idealize/error.hpp"
#include "json.hpp"

namespace idealize::service {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad(std::string_view key, std::string_view why) {
  throw Error(ErrorKind::ConfigError, std::string(key) + ": " + std::string(why));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) bad(key, "expected a number");
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key, "expected an integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, "expected true or false");
}

std::vector<std::string> to_list(std::string_view v) {
  std::vector<std::string> out;
  std::stringstream ss{std::string(v)};
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

bool is_hex_color(const std::string& s) {
  if (s.size() != 7 || s[0] != '#') return false;
  for (std::size_t i = 1; i < 7; ++i) {
    if (!std::isxdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

std::filesystem::path ServiceConfig::resolved_data_dir() const {
  return data_dir.empty() ? default_data_dir() : data_dir;
}
std::filesystem::path ServiceConfig::resolved_fixtures_dir() const {
  return fixtures_dir.empty() ? resolved_data_dir() / "fixtures" : fixtures_dir;
}
std::filesystem::path ServiceConfig::resolved_stoplist() const {
  return stoplist.empty() ? resolved_data_dir() / "stopwords_en.txt" : stoplist;
}
std::filesystem::path ServiceConfig::resolved_lexicon() const {
  return lexicon.empty() ? resolved_data_dir() / "lexicon_en.tsv" : lexicon;
}
std::filesystem::path ServiceConfig::resolved_capitals() const {
  return capitals.empty() ? resolved_data_dir() / "capitals.json" : capitals;
}

void ServiceConfig::validate() const {
  if (window < 2 || window > 10) bad("window", "must be in 2..10");
  if (!(ratio > 0.0 && ratio <= 1.0)) bad("ratio", "must be in (0,1]");
  if (!(damping > 0.0 && damping < 1.0)) bad("damping", "must be in (0,1)");
  if (!(tolerance > 0.0)) bad("tolerance", "must be > 0");
  if (max_iterations < 1) bad("max_iterations", "must be >= 1");
  if (max_keywords < 1) bad("max_keywords", "must be >= 1");
  if (color_ramp.size() != 9) bad("color_ramp", "needs exactly 9 colors");
  for (const auto& c : color_ramp) {
    if (!is_hex_color(c)) bad("color_ramp", "'" + c + "' is not #rrggbb");
  }
  if (mode != "fixture" && mode != "wire") bad("mode", "must be fixture or wire");
  if (!(cache_ttl_hours > 0.0)) bad("cache_ttl_hours", "must be > 0");
  if (!(rate_limit > 0.0)) bad("rate_limit", "must be > 0");
  if (rate_limit_policy != "wait" && rate_limit_policy != "reject") {
    bad("rate_limit_policy", "must be wait or reject");
  }
  if (endpoints.retries < 0) bad("wire_retries", "must be >= 0");
}

void apply_setting(ServiceConfig& c, std::string_view key, std::string_view raw) {
  const std::string v = trim(raw);
  if (key == "window") c.window = to_int(key, v);
  else if (key == "ratio") c.ratio = to_double(key, v);
  else if (key == "damping") c.damping = to_double(key, v);
  else if (key == "tolerance") c.tolerance = to_double(key, v);
  else if (key == "max_iterations") c.max_iterations = to_int(key, v);
  else if (key == "directed") c.directed = to_bool(key, v);
  else if (key == "normalized_scale") c.normalized_scale = to_bool(key, v);
  else if (key == "max_keywords") c.max_keywords = to_int(key, v);
  else if (key == "partial") c.partial = to_bool(key, v);
  else if (key == "include_timings") c.include_timings = to_bool(key, v);
  else if (key == "color_ramp") c.color_ramp = to_list(v);
  else if (key == "mode") c.mode = v;
  else if (key == "data_dir") c.data_dir = v;
  else if (key == "fixtures_dir") c.fixtures_dir = v;
  else if (key == "stoplist") c.stoplist = v;
  else if (key == "lexicon") c.lexicon = v;
  else if (key == "capitals") c.capitals = v;
  else if (key == "cache_dir") c.cache_dir = v;
  else if (key == "cache_ttl_hours") c.cache_ttl_hours = to_double(key, v);
  else if (key == "rate_limit") c.rate_limit = to_double(key, v);
  else if (key == "rate_limit_policy") c.rate_limit_policy = v;
  else if (key == "wire_record_dir") c.wire_record_dir = v;
  else if (key == "wire_replay_dir") c.wire_replay_dir = v;
  else if (key == "wire_base_url") c.endpoints.base_url = v;
  else if (key == "wire_cookie_path") c.endpoints.cookie_path = v;
  else if (key == "wire_explore_path") c.endpoints.explore_path = v;
  else if (key == "wire_multiline_path") c.endpoints.multiline_path = v;
  else if (key == "wire_comparedgeo_path") c.endpoints.comparedgeo_path = v;
  else if (key == "wire_hl") c.endpoints.hl = v;
  else if (key == "wire_tz") c.endpoints.tz = to_int(key, v);
  else if (key == "wire_retries") c.endpoints.retries = to_int(key, v);
  else if (key == "wire_retry_backoff_ms") c.endpoints.retry_backoff = std::chrono::milliseconds(to_int(key, v));
  else bad(key, "unknown setting");
}

ServiceConfig parse_config(std::string_view text, ServiceConfig base) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ConfigError, e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      std::string v;
      if (value.is_string()) v = value.get<std::string>();
      else if (value.is_array()) {
        for (const auto& item : value) {
          if (!v.empty()) v += ',';
          v += item.is_string() ? item.get<std::string>() : item.dump();
        }
      } else v = value.dump();
      apply_setting(base, key, v);
    }
  } else {
    std::stringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) {
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) bad(t, "expected key=value");
      apply_setting(base, trim(std::string_view(t).substr(0, eq)), std::string_view(t).substr(eq + 1));
    }
  }
  base.validate();
  return base;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  auto config = parse_config(read_file(path));
  // Relative paths in a config file resolve against the file's directory.
  const auto base = path.parent_path();
  for (auto* p : {&config.data_dir, &config.fixtures_dir, &config.stoplist, &config.lexicon,
                  &config.capitals, &config.cache_dir, &config.wire_record_dir, &config.wire_replay_dir}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return config;
}

}  // namespace idealize::service
