#pragma once

// HTTP client for the unofficial Trends endpoints: an `explore` handshake
// returns widget tokens, then `multiline` (interest over time) and
// `comparedgeo` (interest by region) return already-normalized values.

#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "idealize/trends_source.hpp"

namespace idealize::trends {

using HttpParams = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Throws Error(WireError, retryable = true) when no response arrives.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& path, const HttpParams& params) = 0;
};

/// `path?k=v&...` in the given parameter order; names recordings.
std::string request_signature(const std::string& path, const HttpParams& params);

/// cpp-httplib backed transport. HTTPS needs the OpenSSL build option.
class HttplibTransport final : public HttpTransport {
 public:
  /// `cookie_path` is fetched once to pick up a session cookie; empty skips it.
  HttplibTransport(std::string base_url, std::string cookie_path = {},
                   std::chrono::seconds timeout = std::chrono::seconds(30));
  HttpResponse get(const std::string& path, const HttpParams& params) override;

 private:
  HttpResponse raw_get(const std::string& path, const HttpParams& params);

  std::string base_url_;
  std::string cookie_path_;
  std::chrono::seconds timeout_;
  std::mutex mutex_;
  bool cookie_fetched_ = false;
  std::string cookie_;
};

/// Forwards to `inner` and saves every exchange under `dir`.
class RecordingTransport final : public HttpTransport {
 public:
  RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path dir);
  HttpResponse get(const std::string& path, const HttpParams& params) override;

 private:
  std::shared_ptr<HttpTransport> inner_;
  std::filesystem::path dir_;
};

/// Serves exchanges saved by RecordingTransport; never touches the network.
class ReplayTransport final : public HttpTransport {
 public:
  explicit ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}
  HttpResponse get(const std::string& path, const HttpParams& params) override;

 private:
  std::filesystem::path dir_;
};

/// Sliding-window limiter: at most `per_second` request starts in any one
/// second (for rates below 1, one start per 1/rate seconds).
class RateLimiter {
 public:
  enum class Policy { Wait, Reject };
  using Clock = std::chrono::steady_clock;

  struct Hooks {
    std::function<Clock::time_point()> now;
    std::function<void(Clock::duration)> sleep;
  };

  RateLimiter(double per_second, Policy policy, Hooks hooks = {});

  /// Blocks until a slot frees up, or throws Error(QuotaExceeded) under Policy::Reject.
  void acquire();
  std::size_t granted() const;

 private:
  double per_second_;
  Policy policy_;
  Hooks hooks_;
  std::size_t capacity_;
  Clock::duration window_;
  mutable std::mutex mutex_;
  std::deque<Clock::time_point> starts_;
  std::size_t granted_ = 0;
};

/// Endpoint table; upstream drift is a config change.
struct WireEndpoints {
  std::string base_url = "https://trends.google.com";
  std::string cookie_path = "/trends/?geo=US";
  std::string explore_path = "/trends/api/explore";
  std::string multiline_path = "/trends/api/widgetdata/multiline";
  std::string comparedgeo_path = "/trends/api/widgetdata/comparedgeo";
  std::string hl = "en-US";
  int tz = 0;
  int retries = 2;
  std::chrono::milliseconds retry_backoff{1000};
};

class WireSource final : public TrendsSource {
 public:
  WireSource(std::shared_ptr<HttpTransport> transport, std::shared_ptr<RateLimiter> limiter,
             WireEndpoints endpoints = {});

  std::string_view mode() const noexcept override { return "wire"; }
  TrendSeries interest_over_time(const QueryKey& key) override;
  RegionInterestTable interest_by_region(const QueryKey& key) override;
  std::vector<TrendSeries> interest_over_time_batch(const std::vector<QueryKey>& keys) override;

 private:
  std::string fetch(const std::string& path, const HttpParams& params);
  std::string explore(const std::vector<QueryKey>& keys);

  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<RateLimiter> limiter_;
  WireEndpoints endpoints_;
};

}  // namespace idealize::trends
