#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "idealize/error.hpp"
#include "idealize/wire.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace idealize;
using namespace idealize::trends;
using nlohmann::json;

namespace {

// Local stand-in for the upstream endpoints, answering like the real service:
// XSSI-prefixed JSON, an explore step handing out widget tokens, then data.
class FakeUpstream {
 public:
  FakeUpstream() {
    server_.Get("/trends/", [this](const httplib::Request&, httplib::Response& res) {
      ++cookie_hits;
      res.set_header("Set-Cookie", "NID=fake-session; Path=/; HttpOnly");
      res.set_content("ok", "text/html");
    });
    server_.Get("/trends/api/explore", [this](const httplib::Request& req, httplib::Response& res) {
      ++explore_hits;
      last_cookie = req.get_header_value("Cookie");
      if (throttle_remaining > 0) {
        --throttle_remaining;
        res.status = 429;
        return;
      }
      const auto body = json::parse(req.get_param_value("req"));
      last_explore = body;
      json widgets = json::array();
      widgets.push_back({{"id", "TIMESERIES"}, {"token", "tok-ts"}, {"request", {{"comparison", body["comparisonItem"]}}}});
      widgets.push_back({{"id", "GEO_MAP_0"}, {"token", "tok-geo"}, {"request", {{"geo", body["comparisonItem"][0]["geo"]}}}});
      res.set_content(")]}'\n" + json{{"widgets", widgets}}.dump(), "application/json");
    });
    server_.Get("/trends/api/widgetdata/multiline", [this](const httplib::Request& req, httplib::Response& res) {
      if (req.get_param_value("token") != "tok-ts") {
        res.status = 401;
        return;
      }
      const auto request = json::parse(req.get_param_value("req"));
      const auto n = request["comparison"].size();
      json timeline = json::array();
      // Column k peaks at 100 / (k + 1), mimicking joint scaling.
      for (int t = 0; t < 3; ++t) {
        json value = json::array();
        json has = json::array();
        for (std::size_t k = 0; k < n; ++k) {
          value.push_back(static_cast<int>((t + 1) * 100 / 3 / (k + 1)));
          has.push_back(true);
        }
        timeline.push_back({{"time", std::to_string(1600000000 + t * 86400)}, {"value", value}, {"hasData", has}});
      }
      res.set_content(")]}',\n" + json{{"default", {{"timelineData", timeline}}}}.dump(), "application/json");
    });
    server_.Get("/trends/api/widgetdata/comparedgeo", [](const httplib::Request& req, httplib::Response& res) {
      if (req.get_param_value("token") != "tok-geo") {
        res.status = 401;
        return;
      }
      json rows = json::array();
      rows.push_back({{"geoCode", "US-CA"}, {"value", {50}}, {"hasData", {true}}});
      rows.push_back({{"geoCode", "US-TX"}, {"value", {25}}, {"hasData", {true}}});
      rows.push_back({{"geoCode", "US-WY"}, {"value", {0}}, {"hasData", {false}}});
      res.set_content(")]}',\n" + json{{"default", {{"geoMapData", rows}}}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeUpstream() {
    server_.stop();
    thread_.join();
  }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> cookie_hits{0};
  std::atomic<int> explore_hits{0};
  std::atomic<int> throttle_remaining{0};
  std::string last_cookie;
  json last_explore;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

WireEndpoints fast_endpoints(const std::string& base) {
  WireEndpoints e;
  e.base_url = base;
  e.cookie_path = "/trends/";
  e.retry_backoff = std::chrono::milliseconds(0);
  return e;
}

std::shared_ptr<RateLimiter> unlimited() {
  return std::make_shared<RateLimiter>(1000.0, RateLimiter::Policy::Wait);
}

}  // namespace

TEST_CASE("wire source speaks the explore/widget protocol") {
  FakeUpstream upstream;
  const auto endpoints = fast_endpoints(upstream.base_url());
  auto transport = std::make_shared<HttplibTransport>(endpoints.base_url, endpoints.cookie_path);
  WireSource source(transport, unlimited(), endpoints);

  const auto k = testing::key("auto parts", "US", "Past 12 months", Context::Youtube);
  const auto s = source.interest_over_time(k);
  REQUIRE(s.points.size() == 3);
  CHECK(s.keyword == "auto parts");
  CHECK(s.points[0].time == 1600000000);
  CHECK(s.points[2].interest == 100.0);
  CHECK(upstream.cookie_hits == 1);
  CHECK(upstream.last_cookie == "NID=fake-session");
  CHECK(upstream.last_explore["comparisonItem"][0]["time"] == "today 12-m");
  CHECK(upstream.last_explore["comparisonItem"][0]["geo"] == "US");
  CHECK(upstream.last_explore["property"] == "youtube");

  const auto t = source.interest_by_region(k);
  CHECK(t.rows == std::map<std::string, double>{{"CA", 100.0}, {"TX", 50.0}, {"WY", 0.0}});
  CHECK(source.read_count() == 2);
}

TEST_CASE("batched columns are rescaled per keyword") {
  FakeUpstream upstream;
  const auto endpoints = fast_endpoints(upstream.base_url());
  WireSource source(std::make_shared<HttplibTransport>(endpoints.base_url), unlimited(), endpoints);
  const auto out = source.interest_over_time_batch({testing::key("a"), testing::key("b"), testing::key("c")});
  REQUIRE(out.size() == 3);
  for (const auto& s : out) {
    double m = 0.0;
    for (const auto& p : s.points) m = std::max(m, p.interest);
    CHECK(m == 100.0);
  }
  CHECK(upstream.explore_hits == 1);
  CHECK_THROWS_AS(source.interest_over_time_batch({testing::key("a"), testing::key("b", "")}), Error);
}

TEST_CASE("throttled requests are retried, then reported as retryable wire errors") {
  FakeUpstream upstream;
  auto endpoints = fast_endpoints(upstream.base_url());
  endpoints.retries = 2;
  WireSource source(std::make_shared<HttplibTransport>(endpoints.base_url), unlimited(), endpoints);

  upstream.throttle_remaining = 2;
  CHECK(source.interest_over_time(testing::key("retry")).points.size() == 3);
  CHECK(upstream.explore_hits == 3);

  upstream.throttle_remaining = 3;
  try {
    source.interest_over_time(testing::key("retry"));
    FAIL("expected WireError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WireError);
    CHECK(e.retryable());
    CHECK(e.detail().find("429") != std::string::npos);
  }
}

TEST_CASE("unreachable upstream is a retryable wire error") {
  auto endpoints = fast_endpoints("http://127.0.0.1:1");
  endpoints.retries = 0;
  WireSource source(std::make_shared<HttplibTransport>(endpoints.base_url, "", std::chrono::seconds(2)),
                    unlimited(), endpoints);
  try {
    source.interest_over_time(testing::key("offline"));
    FAIL("expected WireError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WireError);
    CHECK(e.retryable());
  }
}

TEST_CASE("recorded exchanges replay without the network") {
  testing::TempDir dir;
  const auto k = testing::key("recorded");
  TrendSeries live_series;
  RegionInterestTable live_table;
  {
    FakeUpstream upstream;
    const auto endpoints = fast_endpoints(upstream.base_url());
    auto rec = std::make_shared<RecordingTransport>(std::make_shared<HttplibTransport>(endpoints.base_url),
                                                    dir.path());
    WireSource live(rec, unlimited(), endpoints);
    live_series = live.interest_over_time(k);
    live_table = live.interest_by_region(k);
  }
  // upstream is gone now
  WireSource replay(std::make_shared<ReplayTransport>(dir.path()), unlimited(),
                    fast_endpoints("http://127.0.0.1:1"));
  CHECK(replay.interest_over_time(k) == live_series);
  CHECK(replay.interest_by_region(k) == live_table);
  try {
    replay.interest_over_time(testing::key("never recorded"));
    FAIL("expected WireError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WireError);
  }
}

TEST_CASE("malformed upstream payloads are wire errors") {
  struct Canned final : HttpTransport {
    std::string body;
    HttpResponse get(const std::string&, const HttpParams&) override { return {200, body}; }
  };
  auto canned = std::make_shared<Canned>();
  WireSource source(canned, unlimited(), fast_endpoints("http://unused"));
  const auto expect_wire_error = [&](const std::string& body, const std::string& needle) {
    canned->body = body;
    try {
      source.interest_over_time(testing::key("garbled"));
      FAIL("expected WireError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::WireError);
      CHECK_MESSAGE(e.detail().find(needle) != std::string::npos, e.detail());
    }
  };
  expect_wire_error(")]}'\n{\"widgets\": []}", "TIMESERIES");
  expect_wire_error("<html>blocked</html>", "garbled");
  expect_wire_error(")]}'\n{\"widgets\": [{\"id\": \"TIMESERIES\", \"token\": \"t\", \"request\": {}}]}",
                    "garbled");
}

TEST_CASE("rate limiter admits at most R starts per second") {
  using Clock = RateLimiter::Clock;
  Clock::time_point now{};
  std::vector<Clock::time_point> starts;
  RateLimiter::Hooks hooks{[&] { return now; }, [&](Clock::duration d) { now += d; }};
  RateLimiter limiter(3.0, RateLimiter::Policy::Wait, hooks);
  for (int i = 0; i < 20; ++i) {
    limiter.acquire();
    starts.push_back(now);
  }
  CHECK(limiter.granted() == 20);
  for (std::size_t i = 3; i < starts.size(); ++i) CHECK(starts[i] - starts[i - 3] >= std::chrono::seconds(1));
  // 20 starts at 3/s need at least 6 full windows
  CHECK(starts.back() - starts.front() >= std::chrono::seconds(6));
}

TEST_CASE("rate limiter with fractional rates spaces single starts") {
  using Clock = RateLimiter::Clock;
  Clock::time_point now{};
  RateLimiter limiter(0.5, RateLimiter::Policy::Wait,
                      {[&] { return now; }, [&](Clock::duration d) { now += d; }});
  limiter.acquire();
  const auto first = now;
  limiter.acquire();
  CHECK(now - first >= std::chrono::seconds(2));
}

TEST_CASE("rate limiter reject policy raises QuotaExceeded") {
  using Clock = RateLimiter::Clock;
  Clock::time_point now{};
  RateLimiter limiter(2.0, RateLimiter::Policy::Reject, {[&] { return now; }, {}});
  limiter.acquire();
  limiter.acquire();
  try {
    limiter.acquire();
    FAIL("expected QuotaExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuotaExceeded);
  }
  now += std::chrono::seconds(1);
  CHECK_NOTHROW(limiter.acquire());
  CHECK(limiter.granted() == 3);
  CHECK_THROWS_AS(RateLimiter(0.0, RateLimiter::Policy::Wait), Error);
}

TEST_CASE("rate limiter holds under concurrent callers") {
  RateLimiter limiter(50.0, RateLimiter::Policy::Wait);
  std::mutex m;
  std::vector<RateLimiter::Clock::time_point> starts;
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&] {
      for (int j = 0; j < 30; ++j) {
        limiter.acquire();
        std::lock_guard lock(m);
        starts.push_back(RateLimiter::Clock::now());
      }
    });
  }
  for (auto& t : threads) t.join();
  std::sort(starts.begin(), starts.end());
  REQUIRE(starts.size() == 120);
  // Any 51 consecutive starts span at least one window (small slack for clock reads after acquire).
  for (std::size_t i = 50; i < starts.size(); ++i) {
    CHECK(starts[i] - starts[i - 50] >= std::chrono::milliseconds(990));
  }
}
