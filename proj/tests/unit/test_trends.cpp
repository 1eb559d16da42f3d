#include <functional>
#include <random>

#include "doctest.h"
#include "idealize/error.hpp"
#include "idealize/trends.hpp"
#include "idealize/trends_source.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace idealize;
using namespace idealize::trends;

namespace {

std::vector<double> values(const TrendSeries& s) {
  std::vector<double> out;
  for (const auto& p : s.points) out.push_back(p.interest);
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an idealize::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("normalize_series examples") {
  CHECK(values(normalize_series(testing::raw_series({2, 4, 1}))) == std::vector<double>{50, 100, 25});
  CHECK(values(normalize_series(testing::raw_series({7, 7}))) == std::vector<double>{100, 100});
  CHECK(values(normalize_series(testing::raw_series({0, 0, 0}))) == std::vector<double>{0, 0, 0});
  CHECK(kind_of([] { normalize_series({}); }) == ErrorKind::EmptySeries);
  CHECK(kind_of([] { normalize_series(testing::raw_series({1, -1})); }) == ErrorKind::FixtureInvalid);
  auto backwards = testing::raw_series({1, 2});
  std::swap(backwards.points[0].time, backwards.points[1].time);
  CHECK(kind_of([&] { normalize_series(backwards); }) == ErrorKind::FixtureInvalid);
}

TEST_CASE("normalize_series properties on random series") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(0.0, 1e6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> raw(1 + rng() % 40);
    for (auto& v : raw) v = rng() % 5 == 0 ? 0.0 : value(rng);
    const auto s = normalize_series(testing::raw_series(raw));
    const auto got = values(s);
    CHECK(is_normalized(got));
    const auto expected = oracle::max_normalize(raw);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    // idempotence
    CHECK(values(normalize_series(testing::raw_series(got))) == got);
    // scale invariance
    const double c = std::ldexp(1.0, static_cast<int>(rng() % 20) - 10) * (1.0 + value(rng) / 1e6);
    std::vector<double> scaled;
    for (double v : raw) scaled.push_back(v * c);
    const auto again = values(normalize_series(testing::raw_series(scaled)));
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(again[i] - got[i]) <= 1e-9);
  }
}

TEST_CASE("normalize_regions expresses concentration, not volume") {
  CHECK(normalize_regions({{"CA", 50}, {"TX", 100}, {"NY", 25}}).rows ==
        std::map<std::string, double>{{"CA", 50}, {"TX", 100}, {"NY", 25}});
  CHECK(normalize_regions({{"X", 3.5}}).rows == std::map<std::string, double>{{"X", 100}});
  CHECK(kind_of([] { normalize_regions({}); }) == ErrorKind::EmptySeries);
  // Two regions whose raw shares are proportional land on the 100 vs 55 shape
  // whatever their absolute volume.
  const auto t = normalize_regions({{"A", 0.002}, {"B", 0.0011}});
  CHECK(t.rows.at("A") == 100.0);
  CHECK(std::abs(t.rows.at("B") - 55.0) < 1e-9);
}

TEST_CASE("timeframe table") {
  const std::vector<std::pair<std::string, std::string>> table = {
      {"Last hour", "now 1-H"},
      {"Last four hours", "now 4-H"},
      {"Last day", "now 1-d"},
      {"Last seven days", "now 7-d"},
      {"Past 30 days", "today 1-m"},
      {"Past 90 days", "today 3-m"},
      {"Past 12 months", "today 12-m"},
      {"Last five years", "today+5-y"},
      {"Since the beginning of Google Trends (2004)", "all"}};
  REQUIRE(kAllTimeframes.size() == table.size());
  for (const auto& [label, token] : table) {
    const auto tf = Timeframe::from_label(label);
    REQUIRE(tf);
    CHECK(tf->wire_token() == token);
    CHECK(tf->label_text() == label);
    CHECK(Timeframe::from_wire_token(token) == tf);
    const auto [start, end] = tf->span(1600000000);
    CHECK(end == 1600000000);
    CHECK(start < end);
  }
  CHECK_FALSE(Timeframe::from_label("Past 13 months"));
  CHECK(Timeframe::from_label("Since the beginning of Google Trends (2004)")->span(1600000000).first ==
        parse_iso8601("2004-01-01"));
}

TEST_CASE("contexts") {
  for (const auto* name : {"web", "news", "images", "froogle", "youtube"}) {
    const auto c = parse_context(name);
    REQUIRE(c);
    CHECK(to_string(*c) == name);
  }
  CHECK(wire_property(Context::Web).empty());
  CHECK(wire_property(Context::Youtube) == "youtube");
  CHECK_FALSE(parse_context("Web"));
  CHECK_FALSE(parse_context("shopping"));
}

TEST_CASE("query keys validate and hash stably") {
  auto k = testing::key("business");
  CHECK_NOTHROW(k.validate());
  CHECK(k.stable_hash().size() == 16);
  CHECK(k.stable_hash() == testing::key("business").stable_hash());
  CHECK(k.stable_hash() != testing::key("business", "").stable_hash());
  CHECK(k.stable_hash() != testing::key("business", "US", "Last day").stable_hash());
  CHECK(k.canonical() == "business\nUS\nweb\nPast 12 months");
  CHECK(kind_of([] { testing::key("").validate(); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { testing::key(" padded").validate(); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { testing::key("x", "usa").validate(); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(testing::key("x", "").validate());
}

TEST_CASE("batch_keywords chunks in order") {
  auto sizes = [](std::size_t n) {
    std::vector<std::string> kw;
    for (std::size_t i = 0; i < n; ++i) kw.push_back("k" + std::to_string(i));
    std::vector<std::size_t> out;
    std::vector<std::string> flat;
    for (const auto& b : batch_keywords(kw)) {
      out.push_back(b.size());
      flat.insert(flat.end(), b.begin(), b.end());
    }
    CHECK(flat == kw);
    return out;
  };
  CHECK(sizes(7) == std::vector<std::size_t>{5, 2});
  CHECK(sizes(5) == std::vector<std::size_t>{5});
  CHECK(sizes(1) == std::vector<std::size_t>{1});
  CHECK(sizes(0).empty());
  CHECK(batch_keywords({"a", "b", "c"}, 2).size() == 2);
  CHECK_THROWS_AS(batch_keywords({"a"}, 0), Error);
}

TEST_CASE("fixture documents round trip") {
  FixtureRecord r;
  r.key = testing::key("auto parts", "US", "Last five years", Context::Youtube);
  r.raw_series = testing::raw_series({1, 2.5, 0});
  r.raw_regions = std::map<std::string, double>{{"CA", 3}, {"TX", 1.25}};
  const auto text = fixture_to_json(r);
  const auto back = fixture_from_json(text);
  CHECK(back.key == r.key);
  REQUIRE(back.raw_series);
  CHECK(back.raw_series->points.size() == 3);
  CHECK(back.raw_series->points[1].value == 2.5);
  CHECK(back.raw_regions == r.raw_regions);
  CHECK(fixture_to_json(back) == text);
  CHECK(text.find("\"timeframe_label\": \"Last five years\"") != std::string::npos);

  CHECK(kind_of([] { fixture_from_json("{"); }) == ErrorKind::FixtureInvalid);
  CHECK(kind_of([] { fixture_from_json(R"({"keyword":"x"})"); }) == ErrorKind::FixtureInvalid);
}

TEST_CASE("fixture source normalizes raw fixtures") {
  testing::TempDir dir;
  const auto k = testing::key("business");
  testing::write_fixture(dir.path(), k, {10, 40, 20}, {{"CA", 50}, {"TX", 100}, {"NY", 25}});
  FixtureSource src(dir.path());
  CHECK(values(src.interest_over_time(k)) == std::vector<double>{25, 100, 50});
  CHECK(src.interest_by_region(k).rows.at("CA") == 50);
  CHECK(src.read_count() == 2);
  CHECK(kind_of([&] { src.interest_over_time(testing::key("unknown")); }) == ErrorKind::FixtureMissing);
}

TEST_CASE("fixture source accepts valid pre-normalized fixtures only") {
  testing::TempDir dir;
  const auto k = testing::key("parts");
  FixtureRecord r;
  r.key = k;
  r.series = TrendSeries{"parts", {{1, 100}, {2, 40}}};
  r.regions = RegionInterestTable{"parts", {{"CA", 100}, {"TX", 20}}};
  write_file_atomic(fixture_path(dir.path(), k), fixture_to_json(r));
  FixtureSource src(dir.path());
  CHECK(values(src.interest_over_time(k)) == std::vector<double>{100, 40});
  CHECK(src.interest_by_region(k).rows.at("TX") == 20);

  const auto bad = testing::key("bad");
  r.key = bad;
  r.series = TrendSeries{"bad", {{1, 90}, {2, 40}}};
  write_file_atomic(fixture_path(dir.path(), bad), fixture_to_json(r));
  CHECK(kind_of([&] { src.interest_over_time(bad); }) == ErrorKind::FixtureInvalid);
}

TEST_CASE("fixture source rejects a file stored under another key") {
  testing::TempDir dir;
  const auto a = testing::key("alpha");
  const auto b = testing::key("beta");
  testing::write_fixture(dir.path(), a, {1}, {{"CA", 1}});
  std::filesystem::rename(fixture_path(dir.path(), a), fixture_path(dir.path(), b));
  FixtureSource src(dir.path());
  CHECK(kind_of([&] { src.interest_over_time(b); }) == ErrorKind::FixtureInvalid);
}

TEST_CASE("empty regional fixture table is an EmptySeries error") {
  testing::TempDir dir;
  const auto k = testing::key("nothing");
  testing::write_fixture(dir.path(), k, {1, 2}, {});
  FixtureSource src(dir.path());
  CHECK(kind_of([&] { src.interest_by_region(k); }) == ErrorKind::EmptySeries);
}

TEST_CASE("bundled fixtures are all valid") {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(testing::data_dir() / "fixtures")) {
    const auto record = fixture_from_json(read_file(entry.path()));
    CHECK(entry.path().filename().string() == record.key.stable_hash() + ".json");
    FixtureSource src(testing::data_dir() / "fixtures");
    const auto s = src.interest_over_time(record.key);
    CHECK(is_normalized(values(s)));
    const auto t = src.interest_by_region(record.key);
    if (record.key.geo == "US") CHECK(t.rows.size() == 51);
    ++n;
  }
  CHECK(n > 0);
}
