#include "idealize/util.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include <unistd.h>

#include "idealize/error.hpp"

#ifndef IDEALIZE_BUILD_DATA_DIR
#define IDEALIZE_BUILD_DATA_DIR ""
#endif
#ifndef IDEALIZE_INSTALL_DATA_DIR
#define IDEALIZE_INSTALL_DATA_DIR ""
#endif

namespace idealize {
namespace {

// Howard Hinnant's days_from_civil / civil_from_days.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  if (pos + len > text.size()) {
    throw Error(ErrorKind::InvalidArgument, "truncated timestamp '" + std::string(text) + "'");
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
  if (ec != std::errc{} || ptr != text.data() + pos + len) {
    throw Error(ErrorKind::InvalidArgument, "bad timestamp '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

UnixSeconds parse_iso8601(std::string_view text) {
  const int year = parse_fixed(text, 0, 4);
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    throw Error(ErrorKind::InvalidArgument, "bad timestamp '" + std::string(text) + "'");
  }
  const int month = parse_fixed(text, 5, 2);
  const int day = parse_fixed(text, 8, 2);
  int hour = 0, minute = 0, second = 0;
  if (text.size() > 10) {
    if (text[10] != 'T' || text.size() < 19 || text[13] != ':' || text[16] != ':') {
      throw Error(ErrorKind::InvalidArgument, "bad timestamp '" + std::string(text) + "'");
    }
    hour = parse_fixed(text, 11, 2);
    minute = parse_fixed(text, 14, 2);
    second = parse_fixed(text, 17, 2);
    const auto rest = text.substr(19);
    if (!(rest.empty() || rest == "Z")) {
      throw Error(ErrorKind::InvalidArgument, "unsupported timezone in '" + std::string(text) + "'");
    }
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    throw Error(ErrorKind::InvalidArgument, "timestamp out of range '" + std::string(text) + "'");
  }
  static constexpr int kMonthDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (day > kMonthDays[month - 1] || (month == 2 && day == 29 && !leap)) {
    throw Error(ErrorKind::InvalidArgument, "no such day '" + std::string(text) + "'");
  }
  return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
         hour * 3600 + minute * 60 + second;
}

std::string format_iso8601(UnixSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t secs = t % 86400;
  if (secs < 0) {
    secs += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02dZ", static_cast<long long>(y), m, d,
                static_cast<int>(secs / 3600), static_cast<int>(secs % 3600 / 60),
                static_cast<int>(secs % 60));
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw Error(ErrorKind::InvalidArgument, "cannot format number");
  }
  return std::string(buf.data(), ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000) + "." +
         std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw Error(ErrorKind::IoError, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot replace " + path.string());
  }
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("IDEALIZE_DATA_DIR"); env && *env) {
    return env;
  }
  std::error_code ec;
  const std::filesystem::path build_dir = IDEALIZE_BUILD_DATA_DIR;
  if (!build_dir.empty() && std::filesystem::exists(build_dir / "lexicon_en.tsv", ec)) {
    return build_dir;
  }
  return IDEALIZE_INSTALL_DATA_DIR;
}

}  // namespace idealize
