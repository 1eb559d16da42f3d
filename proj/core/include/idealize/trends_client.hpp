#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "idealize/error.hpp"
#include "idealize/trends_source.hpp"

namespace idealize::trends {

/// File store of fetched results, one file per (QueryKey, kind). Entries older
/// than the TTL read as misses. Writes are atomic per entry.
class FileCache {
 public:
  using Clock = std::chrono::system_clock;

  FileCache(std::filesystem::path dir, std::chrono::seconds ttl,
            std::function<Clock::time_point()> now = {});

  std::optional<TrendSeries> get_series(const QueryKey& key) const;
  std::optional<RegionInterestTable> get_regions(const QueryKey& key) const;
  void put(const QueryKey& key, const TrendSeries& series) const;
  void put(const QueryKey& key, const RegionInterestTable& table) const;

  std::filesystem::path entry_path(const QueryKey& key, std::string_view kind) const;

 private:
  std::optional<std::string> read_payload(const QueryKey& key, std::string_view kind) const;
  void write_payload(const QueryKey& key, std::string_view kind, const std::string& payload) const;

  std::filesystem::path dir_;
  std::chrono::seconds ttl_;
  std::function<Clock::time_point()> now_;
};

struct ClientOptions {
  std::size_t max_per_request = 5;
  std::chrono::seconds memory_ttl{24 * 3600};
  std::shared_ptr<FileCache> file_cache;  // optional
};

/// Per-keyword result of a multi-keyword fetch.
struct SeriesOutcome {
  std::optional<TrendSeries> series;
  std::optional<Error> error;
};

/// Caching front for a TrendsSource, shareable across threads. Concurrent
/// requests for one key share a single underlying read.
class TrendsClient {
 public:
  explicit TrendsClient(std::shared_ptr<TrendsSource> source, ClientOptions options = {});

  TrendSeries fetch_interest_over_time(const QueryKey& key);
  RegionInterestTable fetch_interest_by_region(const QueryKey& key);

  /// Fetches uncached keys in batches of at most `max_per_request`. A failing
  /// batch is retried key by key so each failure names its keyword.
  std::vector<SeriesOutcome> fetch_interest_over_time_many(const std::vector<QueryKey>& keys);

  TrendsSource& source() noexcept { return *source_; }
  std::string_view mode() const noexcept { return source_->mode(); }

 private:
  template <typename T>
  struct Entry {
    std::shared_future<T> value;
    std::chrono::steady_clock::time_point stored;
    std::uint64_t generation = 0;
  };

  // `owner` is set when the caller must produce the value.
  template <typename T>
  struct Claim {
    std::shared_future<T> future;
    std::optional<std::promise<T>> owner;
    std::uint64_t generation = 0;
  };

  template <typename T>
  Claim<T> claim(std::map<std::string, Entry<T>>& memo, const std::string& id);
  template <typename T>
  void fail(std::map<std::string, Entry<T>>& memo, const std::string& id, Claim<T>& c,
            std::exception_ptr error);

  std::shared_ptr<TrendsSource> source_;
  ClientOptions options_;
  std::mutex mutex_;
  std::uint64_t generation_ = 0;
  std::map<std::string, Entry<TrendSeries>> series_;
  std::map<std::string, Entry<RegionInterestTable>> regions_;
};

}  // namespace idealize::trends
