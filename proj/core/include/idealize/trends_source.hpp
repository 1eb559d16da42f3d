#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idealize/trends.hpp"

namespace idealize::trends {

/// Where series and regional tables come from. Implementations must be safe
/// to call from several threads at once.
class TrendsSource {
 public:
  virtual ~TrendsSource() = default;

  virtual std::string_view mode() const noexcept = 0;
  virtual TrendSeries interest_over_time(const QueryKey& key) = 0;
  virtual RegionInterestTable interest_by_region(const QueryKey& key) = 0;

  /// Keys share geo, context and timeframe. Each returned series is still
  /// normalized against its own maximum. The default fetches one at a time.
  virtual std::vector<TrendSeries> interest_over_time_batch(const std::vector<QueryKey>& keys);

  /// Underlying reads performed so far (fixture file loads or wire exchanges).
  std::size_t read_count() const noexcept { return reads_.load(); }

 protected:
  void count_read() noexcept { ++reads_; }

 private:
  std::atomic<std::size_t> reads_{0};
};

/// On-disk fixture: one JSON document per QueryKey, named `<stable_hash>.json`.
struct FixtureRecord {
  QueryKey key;
  std::optional<RawSeries> raw_series;
  std::optional<std::map<std::string, double>> raw_regions;
  // Pre-normalized variants; must already satisfy the max = 100 rule.
  std::optional<TrendSeries> series;
  std::optional<RegionInterestTable> regions;
};

std::string fixture_to_json(const FixtureRecord& record);
/// Throws Error(FixtureInvalid) on malformed documents.
FixtureRecord fixture_from_json(std::string_view json);
std::filesystem::path fixture_path(const std::filesystem::path& dir, const QueryKey& key);

class FixtureSource final : public TrendsSource {
 public:
  explicit FixtureSource(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::string_view mode() const noexcept override { return "fixture"; }
  TrendSeries interest_over_time(const QueryKey& key) override;
  RegionInterestTable interest_by_region(const QueryKey& key) override;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  FixtureRecord load(const QueryKey& key);

  std::filesystem::path dir_;
};

}  // namespace idealize::trends
