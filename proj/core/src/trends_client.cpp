#include "idealize/trends_client.hpp"

#include "json.hpp"

namespace idealize::trends {
namespace {

using nlohmann::ordered_json;

std::string series_payload(const TrendSeries& s) {
  ordered_json doc;
  doc["keyword"] = s.keyword;
  auto& pts = doc["points"] = ordered_json::array();
  for (const auto& p : s.points) pts.push_back({p.time, p.interest});
  return doc.dump();
}

TrendSeries series_from_payload(const ordered_json& doc) {
  TrendSeries s{doc.at("keyword").get<std::string>(), {}};
  for (const auto& p : doc.at("points")) {
    s.points.push_back({p.at(0).get<UnixSeconds>(), p.at(1).get<double>()});
  }
  return s;
}

std::string regions_payload(const RegionInterestTable& t) {
  ordered_json doc;
  doc["keyword"] = t.keyword;
  auto& rows = doc["rows"] = ordered_json::object();
  for (const auto& [code, v] : t.rows) rows[code] = v;
  return doc.dump();
}

RegionInterestTable regions_from_payload(const ordered_json& doc) {
  RegionInterestTable t{doc.at("keyword").get<std::string>(), {}};
  for (const auto& [code, v] : doc.at("rows").items()) t.rows.emplace(code, v.get<double>());
  return t;
}

}  // namespace

FileCache::FileCache(std::filesystem::path dir, std::chrono::seconds ttl,
                     std::function<Clock::time_point()> now)
    : dir_(std::move(dir)), ttl_(ttl), now_(std::move(now)) {
  if (!now_) now_ = [] { return Clock::now(); };
  std::filesystem::create_directories(dir_);
}

std::filesystem::path FileCache::entry_path(const QueryKey& key, std::string_view kind) const {
  return dir_ / (key.stable_hash() + "." + std::string(kind) + ".json");
}

std::optional<std::string> FileCache::read_payload(const QueryKey& key, std::string_view kind) const {
  const auto path = entry_path(key, kind);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    const auto doc = ordered_json::parse(read_file(path));
    if (doc.at("key").get<std::string>() != key.canonical()) return std::nullopt;
    const auto stored = Clock::time_point(std::chrono::seconds(doc.at("stored_at").get<std::int64_t>()));
    if (now_() - stored >= ttl_) return std::nullopt;
    return doc.at("payload").dump();
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entries count as misses and get overwritten
  }
}

void FileCache::write_payload(const QueryKey& key, std::string_view kind, const std::string& payload) const {
  ordered_json doc;
  doc["key"] = key.canonical();
  doc["stored_at"] =
      std::chrono::duration_cast<std::chrono::seconds>(now_().time_since_epoch()).count();
  doc["payload"] = ordered_json::parse(payload);
  write_file_atomic(entry_path(key, kind), doc.dump() + "\n");
}

std::optional<TrendSeries> FileCache::get_series(const QueryKey& key) const {
  if (auto p = read_payload(key, "series")) return series_from_payload(ordered_json::parse(*p));
  return std::nullopt;
}

std::optional<RegionInterestTable> FileCache::get_regions(const QueryKey& key) const {
  if (auto p = read_payload(key, "regions")) return regions_from_payload(ordered_json::parse(*p));
  return std::nullopt;
}

void FileCache::put(const QueryKey& key, const TrendSeries& series) const {
  write_payload(key, "series", series_payload(series));
}

void FileCache::put(const QueryKey& key, const RegionInterestTable& table) const {
  write_payload(key, "regions", regions_payload(table));
}

TrendsClient::TrendsClient(std::shared_ptr<TrendsSource> source, ClientOptions options)
    : source_(std::move(source)), options_(std::move(options)) {
  if (!source_) throw Error(ErrorKind::InvalidArgument, "trends client needs a source");
  if (options_.max_per_request == 0) {
    throw Error(ErrorKind::InvalidArgument, "max_per_request must be >= 1");
  }
}

template <typename T>
TrendsClient::Claim<T> TrendsClient::claim(std::map<std::string, Entry<T>>& memo, const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto now = std::chrono::steady_clock::now();
  auto it = memo.find(id);
  if (it != memo.end() && now - it->second.stored < options_.memory_ttl) {
    return {it->second.value, std::nullopt, it->second.generation};
  }
  std::promise<T> promise;
  Entry<T> entry{promise.get_future().share(), now, ++generation_};
  memo[id] = entry;
  return {entry.value, std::move(promise), entry.generation};
}

template <typename T>
void TrendsClient::fail(std::map<std::string, Entry<T>>& memo, const std::string& id, Claim<T>& c,
                        std::exception_ptr error) {
  c.owner->set_exception(error);
  std::lock_guard lock(mutex_);
  // Failures are not cached; the next caller retries.
  if (auto it = memo.find(id); it != memo.end() && it->second.generation == c.generation) memo.erase(it);
}

RegionInterestTable TrendsClient::fetch_interest_by_region(const QueryKey& key) {
  key.validate();
  const auto id = key.stable_hash();
  auto c = claim(regions_, id);
  if (c.owner) {
    try {
      std::optional<RegionInterestTable> table;
      if (options_.file_cache) table = options_.file_cache->get_regions(key);
      if (!table) {
        table = source_->interest_by_region(key);
        if (options_.file_cache) options_.file_cache->put(key, *table);
      }
      c.owner->set_value(std::move(*table));
    } catch (...) {
      fail(regions_, id, c, std::current_exception());
    }
  }
  return c.future.get();
}

std::vector<SeriesOutcome> TrendsClient::fetch_interest_over_time_many(const std::vector<QueryKey>& keys) {
  std::vector<SeriesOutcome> out(keys.size());
  std::vector<Claim<TrendSeries>> claims;
  std::vector<std::string> ids;
  claims.reserve(keys.size());
  // Validate everything before claiming so a bad key cannot strand a claim.
  for (const auto& k : keys) k.validate();
  for (const auto& k : keys) {
    ids.push_back(k.stable_hash());
    claims.push_back(claim(series_, ids.back()));
  }

  auto settle = [&](std::size_t i, auto&& produce) {
    try {
      TrendSeries s = produce();
      if (options_.file_cache) options_.file_cache->put(keys[i], s);
      claims[i].owner->set_value(std::move(s));
    } catch (...) {
      fail(series_, ids[i], claims[i], std::current_exception());
    }
  };

  // Owned keys: file cache first, then the source in batches.
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!claims[i].owner) continue;
    std::optional<TrendSeries> cached;
    if (options_.file_cache) {
      try {
        cached = options_.file_cache->get_series(keys[i]);
      } catch (const std::exception&) {
      }
    }
    if (cached) {
      claims[i].owner->set_value(std::move(*cached));
    } else {
      pending.push_back(i);
    }
  }
  for (std::size_t start = 0; start < pending.size(); start += options_.max_per_request) {
    const auto end = std::min(pending.size(), start + options_.max_per_request);
    std::vector<QueryKey> batch;
    for (auto j = start; j < end; ++j) batch.push_back(keys[pending[j]]);
    std::vector<TrendSeries> results;
    bool batch_ok = false;
    if (batch.size() > 1) {
      try {
        results = source_->interest_over_time_batch(batch);
        batch_ok = results.size() == batch.size();
      } catch (const Error&) {
      }
    }
    for (auto j = start; j < end; ++j) {
      const auto i = pending[j];
      if (batch_ok) {
        settle(i, [&] { return std::move(results[j - start]); });
      } else {
        settle(i, [&] { return source_->interest_over_time(keys[i]); });
      }
    }
  }

  for (std::size_t i = 0; i < keys.size(); ++i) {
    try {
      out[i].series = claims[i].future.get();
    } catch (const Error& e) {
      out[i].error = e;
    }
  }
  return out;
}

TrendSeries TrendsClient::fetch_interest_over_time(const QueryKey& key) {
  auto outcome = fetch_interest_over_time_many({key}).front();
  if (outcome.error) throw *outcome.error;
  return std::move(*outcome.series);
}

}  // namespace idealize::trends
