#include <thread>

#include "doctest.h"
#include "idealize/error.hpp"
#include "idealize/util.hpp"
#include "test_support.hpp"

using namespace idealize;

TEST_CASE("iso8601 round trip") {
  CHECK(parse_iso8601("1970-01-01") == 0);
  CHECK(parse_iso8601("2004-01-01") == 1072915200);
  CHECK(parse_iso8601("2020-02-29T12:34:56Z") == 1582979696);
  CHECK(parse_iso8601("2020-02-29T12:34:56") == 1582979696);
  CHECK(format_iso8601(1582979696) == "2020-02-29T12:34:56Z");
  CHECK(format_iso8601(-86400) == "1969-12-31T00:00:00Z");
  for (UnixSeconds t = -5'000'000'000; t < 5'000'000'000; t += 123'456'789) CHECK(parse_iso8601(format_iso8601(t)) == t);
  for (const char* bad : {"", "2020-13-01", "2020-02-30", "2020-1-1", "2020-01-01T25:00:00Z", "2020-01-01Tx", "yesterday"}) {
    CHECK_THROWS_AS(parse_iso8601(bad), Error);
  }
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("format_number is shortest round trip") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(100.0) == "100");
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_number(1e-7) == "1e-07");
}

TEST_CASE("atomic writes never expose partial files") {
  testing::TempDir dir;
  const auto path = dir.path() / "doc.txt";
  const std::string a(100000, 'a'), b(100000, 'b');
  std::atomic<bool> stop{false};
  std::atomic<int> torn{0};
  write_file_atomic(path, a);
  std::thread reader([&] {
    while (!stop) {
      const auto s = read_file(path);
      if (s != a && s != b) ++torn;
    }
  });
  for (int i = 0; i < 200; ++i) write_file_atomic(path, i % 2 ? a : b);
  stop = true;
  reader.join();
  CHECK(torn == 0);
  CHECK_THROWS_AS(read_file(dir.path() / "absent"), Error);
}

TEST_CASE("error kinds render by name") {
  const Error e(ErrorKind::GridMismatch, "detail here");
  CHECK(std::string(e.what()) == "GridMismatch: detail here");
  CHECK(to_string(ErrorKind::TrendsError) == "TrendsError");
  CHECK_FALSE(e.retryable());
}
