#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "idealize/trends_source.hpp"
#include "idealize/util.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "idealize") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline idealize::trends::QueryKey key(const std::string& keyword, const std::string& geo = "US",
                                      const std::string& timeframe = "Past 12 months",
                                      idealize::trends::Context context = idealize::trends::Context::Web) {
  return {keyword, geo, context, *idealize::trends::Timeframe::from_label(timeframe)};
}

/// Raw series on a daily grid starting at 2020-01-01.
inline idealize::trends::RawSeries raw_series(const std::vector<double>& values,
                                              idealize::UnixSeconds start = 1577836800,
                                              std::int64_t step = 86400) {
  idealize::trends::RawSeries raw;
  for (std::size_t i = 0; i < values.size(); ++i) {
    raw.points.push_back({start + static_cast<std::int64_t>(i) * step, values[i]});
  }
  return raw;
}

inline void write_fixture(const std::filesystem::path& dir, const idealize::trends::QueryKey& k,
                          const std::vector<double>& series, const std::map<std::string, double>& regions) {
  idealize::trends::FixtureRecord r;
  r.key = k;
  r.raw_series = raw_series(series);
  r.raw_regions = regions;
  idealize::write_file_atomic(idealize::trends::fixture_path(dir, k), idealize::trends::fixture_to_json(r));
}

inline std::filesystem::path source_dir() { return IDEALIZE_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "core" / "data"; }
inline std::filesystem::path test_data_dir() { return source_dir() / "tests" / "data"; }
inline std::string idea_text(int n) {
  return idealize::read_file(data_dir() / "ideas" / ("input_text_" + std::to_string(n) + ".txt"));
}

}  // namespace testing
