#include "idealize/wire.hpp"

#include <cmath>
#include <thread>

#include "httplib.h"
#include "idealize/error.hpp"
#include "json.hpp"

namespace idealize::trends {
namespace {

using nlohmann::json;

// Upstream prefixes JSON bodies with an anti-XSSI guard like ")]}'," .
json parse_guarded(const std::string& body, const std::string& what) {
  const auto start = body.find('{');
  if (start == std::string::npos) {
    throw Error(ErrorKind::WireError, what + ": response carries no JSON object");
  }
  try {
    return json::parse(body.begin() + static_cast<std::ptrdiff_t>(start), body.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::WireError, what + ": " + e.what());
  }
}

const json& find_widget(const json& explore, std::string_view id_prefix, const std::string& what) {
  const auto widgets = explore.find("widgets");
  if (widgets == explore.end() || !widgets->is_array()) {
    throw Error(ErrorKind::WireError, what + ": explore response has no widgets");
  }
  for (const auto& w : *widgets) {
    const auto id = w.value("id", "");
    if (id.rfind(id_prefix, 0) == 0 && w.contains("token") && w.contains("request")) return w;
  }
  throw Error(ErrorKind::WireError, what + ": explore response has no " + std::string(id_prefix) + " widget");
}

std::string keywords_of(const std::vector<QueryKey>& keys) {
  std::string s;
  for (const auto& k : keys) {
    if (!s.empty()) s += ", ";
    s += "'" + k.keyword + "'";
  }
  return s;
}

}  // namespace

std::string request_signature(const std::string& path, const HttpParams& params) {
  std::string sig = path;
  char sep = '?';
  for (const auto& [k, v] : params) {
    sig += sep;
    sig += k;
    sig += '=';
    sig += v;
    sep = '&';
  }
  return sig;
}

HttplibTransport::HttplibTransport(std::string base_url, std::string cookie_path,
                                   std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), cookie_path_(std::move(cookie_path)), timeout_(timeout) {}

HttpResponse HttplibTransport::raw_get(const std::string& path, const HttpParams& params) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  httplib::Params query;
  for (const auto& [k, v] : params) query.emplace(k, v);
  httplib::Headers headers{{"Accept", "application/json, text/plain, */*"}};
  {
    std::lock_guard lock(mutex_);
    if (!cookie_.empty()) headers.emplace("Cookie", cookie_);
  }
  auto res = client.Get(path, query, headers);
  if (!res) {
    throw Error(ErrorKind::WireError,
                "GET " + path + " failed: " + httplib::to_string(res.error()), /*retryable=*/true);
  }
  if (res->has_header("Set-Cookie")) {
    const auto cookie = res->get_header_value("Set-Cookie");
    std::lock_guard lock(mutex_);
    cookie_ = cookie.substr(0, cookie.find(';'));
  }
  return {res->status, res->body};
}

HttpResponse HttplibTransport::get(const std::string& path, const HttpParams& params) {
  bool need_cookie = false;
  {
    std::lock_guard lock(mutex_);
    need_cookie = !cookie_fetched_ && !cookie_path_.empty();
    cookie_fetched_ = true;
  }
  if (need_cookie) {
    try {
      raw_get(cookie_path_, {});
    } catch (const Error&) {
      // A missing session cookie surfaces later as a 429 on the real request.
    }
  }
  return raw_get(path, params);
}

RecordingTransport::RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

HttpResponse RecordingTransport::get(const std::string& path, const HttpParams& params) {
  auto response = inner_->get(path, params);
  const auto sig = request_signature(path, params);
  nlohmann::ordered_json doc;
  doc["request"] = sig;
  doc["status"] = response.status;
  doc["body"] = response.body;
  write_file_atomic(dir_ / (hex64(fnv1a64(sig)) + ".json"), doc.dump(1) + "\n");
  return response;
}

HttpResponse ReplayTransport::get(const std::string& path, const HttpParams& params) {
  const auto sig = request_signature(path, params);
  const auto file = dir_ / (hex64(fnv1a64(sig)) + ".json");
  std::error_code ec;
  if (!std::filesystem::exists(file, ec)) {
    throw Error(ErrorKind::WireError, "no recording for " + sig);
  }
  const auto doc = json::parse(read_file(file));
  if (doc.at("request").get<std::string>() != sig) {
    throw Error(ErrorKind::WireError, "recording " + file.string() + " is for another request");
  }
  return {doc.at("status").get<int>(), doc.at("body").get<std::string>()};
}

RateLimiter::RateLimiter(double per_second, Policy policy, Hooks hooks)
    : per_second_(per_second), policy_(policy), hooks_(std::move(hooks)) {
  if (!(per_second > 0.0) || !std::isfinite(per_second)) {
    throw Error(ErrorKind::InvalidArgument, "rate limit must be a positive number");
  }
  if (!hooks_.now) hooks_.now = [] { return Clock::now(); };
  if (!hooks_.sleep) hooks_.sleep = [](Clock::duration d) { std::this_thread::sleep_for(d); };
  capacity_ = static_cast<std::size_t>(std::max(1.0, std::floor(per_second)));
  window_ = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(static_cast<double>(capacity_) / per_second));
}

void RateLimiter::acquire() {
  for (;;) {
    Clock::duration wait{};
    {
      std::lock_guard lock(mutex_);
      const auto now = hooks_.now();
      while (!starts_.empty() && now - starts_.front() >= window_) starts_.pop_front();
      if (starts_.size() < capacity_) {
        starts_.push_back(now);
        ++granted_;
        return;
      }
      if (policy_ == Policy::Reject) {
        throw Error(ErrorKind::QuotaExceeded,
                    "more than " + format_number(per_second_) + " requests per second");
      }
      wait = starts_.front() + window_ - now;
    }
    hooks_.sleep(wait);
  }
}

std::size_t RateLimiter::granted() const {
  std::lock_guard lock(mutex_);
  return granted_;
}

WireSource::WireSource(std::shared_ptr<HttpTransport> transport, std::shared_ptr<RateLimiter> limiter,
                       WireEndpoints endpoints)
    : transport_(std::move(transport)), limiter_(std::move(limiter)), endpoints_(std::move(endpoints)) {}

std::string WireSource::fetch(const std::string& path, const HttpParams& params) {
  for (int attempt = 0;; ++attempt) {
    try {
      if (limiter_) limiter_->acquire();
      const auto res = transport_->get(path, params);
      if (res.status == 200) return res.body;
      const bool retryable = res.status == 429 || res.status >= 500;
      throw Error(ErrorKind::WireError, "GET " + path + " returned HTTP " + std::to_string(res.status),
                  retryable);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::WireError || !e.retryable() || attempt >= endpoints_.retries) throw;
    }
    std::this_thread::sleep_for(endpoints_.retry_backoff * (attempt + 1));
  }
}

std::string WireSource::explore(const std::vector<QueryKey>& keys) {
  json req;
  auto& items = req["comparisonItem"] = json::array();
  for (const auto& k : keys) {
    items.push_back({{"keyword", k.keyword}, {"geo", k.geo}, {"time", std::string(k.timeframe.wire_token())}});
  }
  req["category"] = 0;
  req["property"] = std::string(wire_property(keys.front().context));
  return fetch(endpoints_.explore_path, {{"hl", endpoints_.hl},
                                         {"tz", std::to_string(endpoints_.tz)},
                                         {"req", req.dump()}});
}

std::vector<TrendSeries> WireSource::interest_over_time_batch(const std::vector<QueryKey>& keys) {
  if (keys.empty()) return {};
  for (const auto& k : keys) {
    k.validate();
    if (k.geo != keys.front().geo || k.context != keys.front().context ||
        k.timeframe != keys.front().timeframe) {
      throw Error(ErrorKind::InvalidArgument, "batched keys must share geo, context and timeframe");
    }
  }
  const auto what = "interest over time for " + keywords_of(keys);
  count_read();
  const auto exploration = parse_guarded(explore(keys), what);
  const auto& widget = find_widget(exploration, "TIMESERIES", what);
  const auto data = parse_guarded(
      fetch(endpoints_.multiline_path, {{"hl", endpoints_.hl},
                                        {"tz", std::to_string(endpoints_.tz)},
                                        {"req", widget["request"].dump()},
                                        {"token", widget["token"].get<std::string>()}}),
      what);

  std::vector<RawSeries> raw(keys.size());
  try {
    for (const auto& entry : data.at("default").at("timelineData")) {
      const auto t = std::stoll(entry.at("time").get<std::string>());
      const auto& values = entry.at("value");
      const auto has = entry.value("hasData", json::array());
      if (values.size() < keys.size()) {
        throw Error(ErrorKind::WireError, what + ": fewer value columns than keywords");
      }
      for (std::size_t i = 0; i < keys.size(); ++i) {
        const bool present = i >= has.size() || has[i].get<bool>();
        raw[i].points.push_back({t, present ? values[i].get<double>() : 0.0});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::WireError, what + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorKind::WireError, what + ": bad timestamp");
  }
  // Upstream scales a multi-keyword request against the joint maximum, so each
  // column is rescaled against its own maximum.
  std::vector<TrendSeries> out;
  out.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (raw[i].points.empty()) {
      throw Error(ErrorKind::EmptySeries, "no interest-over-time points for '" + keys[i].keyword + "'");
    }
    out.push_back(normalize_series(raw[i], keys[i].keyword));
  }
  return out;
}

TrendSeries WireSource::interest_over_time(const QueryKey& key) {
  return std::move(interest_over_time_batch({key}).front());
}

RegionInterestTable WireSource::interest_by_region(const QueryKey& key) {
  key.validate();
  const auto what = "interest by region for '" + key.keyword + "'";
  count_read();
  const auto exploration = parse_guarded(explore({key}), what);
  const auto& widget = find_widget(exploration, "GEO_MAP", what);
  const auto data = parse_guarded(
      fetch(endpoints_.comparedgeo_path, {{"hl", endpoints_.hl},
                                          {"tz", std::to_string(endpoints_.tz)},
                                          {"req", widget["request"].dump()},
                                          {"token", widget["token"].get<std::string>()}}),
      what);
  std::map<std::string, double> rows;
  const std::string prefix = key.geo.empty() ? std::string() : key.geo + "-";
  try {
    for (const auto& entry : data.at("default").at("geoMapData")) {
      auto code = entry.at("geoCode").get<std::string>();
      if (!prefix.empty() && code.rfind(prefix, 0) == 0) code.erase(0, prefix.size());
      const auto has = entry.value("hasData", json::array());
      const bool present = has.empty() || has[0].get<bool>();
      rows[code] = present ? entry.at("value").at(0).get<double>() : 0.0;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::WireError, what + ": " + e.what());
  }
  return normalize_regions(rows, key.keyword);
}

}  // namespace idealize::trends
