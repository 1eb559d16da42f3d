#include "idealize/trends.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "idealize/error.hpp"

namespace idealize::trends {
namespace {

struct TimeframeRow {
  TimeframeLabel label;
  std::string_view text;
  std::string_view token;
  std::int64_t length;      // seconds; 0 for "since 2004"
  std::int64_t resolution;  // seconds
};

constexpr std::int64_t kMinute = 60;
constexpr std::int64_t kHour = 3600;
constexpr std::int64_t kDay = 86400;

constexpr std::array<TimeframeRow, 9> kTimeframes = {{
    {TimeframeLabel::LastHour, "Last hour", "now 1-H", kHour, kMinute},
    {TimeframeLabel::LastFourHours, "Last four hours", "now 4-H", 4 * kHour, kMinute},
    {TimeframeLabel::LastDay, "Last day", "now 1-d", kDay, 8 * kMinute},
    {TimeframeLabel::LastSevenDays, "Last seven days", "now 7-d", 7 * kDay, kHour},
    {TimeframeLabel::Past30Days, "Past 30 days", "today 1-m", 30 * kDay, kDay},
    {TimeframeLabel::Past90Days, "Past 90 days", "today 3-m", 90 * kDay, kDay},
    {TimeframeLabel::Past12Months, "Past 12 months", "today 12-m", 365 * kDay, 7 * kDay},
    {TimeframeLabel::LastFiveYears, "Last five years", "today+5-y", 5 * 365 * kDay, 7 * kDay},
    {TimeframeLabel::SinceBeginning, "Since the beginning of Google Trends (2004)", "all", 0,
     30 * kDay},
}};

const TimeframeRow& row(TimeframeLabel label) {
  return kTimeframes[static_cast<std::size_t>(label)];
}

void check_values(const std::vector<double>& values, std::string_view what) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::FixtureInvalid, std::string(what) + " holds a negative or non-finite value");
    }
  }
}

std::vector<double> scale_to_100(const std::vector<double>& values) {
  const double max = *std::max_element(values.begin(), values.end());
  std::vector<double> out(values.size(), 0.0);
  if (max > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / max * 100.0;
  }
  return out;
}

}  // namespace

std::string_view to_string(Context c) noexcept {
  switch (c) {
    case Context::Web: return "web";
    case Context::News: return "news";
    case Context::Images: return "images";
    case Context::Froogle: return "froogle";
    case Context::Youtube: return "youtube";
  }
  return "web";
}

std::optional<Context> parse_context(std::string_view name) {
  for (auto c : kAllContexts) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view wire_property(Context c) noexcept {
  return c == Context::Web ? std::string_view{} : to_string(c);
}

std::string_view Timeframe::label_text() const noexcept { return row(label).text; }
std::string_view Timeframe::wire_token() const noexcept { return row(label).token; }
std::int64_t Timeframe::resolution_seconds() const noexcept { return row(label).resolution; }

std::pair<UnixSeconds, UnixSeconds> Timeframe::span(UnixSeconds now) const noexcept {
  const auto& r = row(label);
  if (r.length == 0) return {1072915200, now};  // 2004-01-01T00:00:00Z
  return {now - r.length, now};
}

std::optional<Timeframe> Timeframe::from_label(std::string_view text) {
  for (const auto& r : kTimeframes) {
    if (r.text == text) return Timeframe{r.label};
  }
  return std::nullopt;
}

std::optional<Timeframe> Timeframe::from_wire_token(std::string_view token) {
  for (const auto& r : kTimeframes) {
    if (r.token == token) return Timeframe{r.label};
  }
  return std::nullopt;
}

void QueryKey::validate() const {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  if (keyword.empty() || is_space(keyword.front()) || is_space(keyword.back())) {
    throw Error(ErrorKind::InvalidArgument, "keyword must be nonempty and trimmed");
  }
  const bool geo_ok = geo.empty() || (geo.size() == 2 && std::isupper(static_cast<unsigned char>(geo[0])) &&
                                      std::isupper(static_cast<unsigned char>(geo[1])));
  if (!geo_ok) {
    throw Error(ErrorKind::InvalidArgument, "geo must be an ISO 3166-1 alpha-2 code or empty");
  }
}

std::string QueryKey::canonical() const {
  std::string s = keyword;
  s += '\n';
  s += geo;
  s += '\n';
  s += to_string(context);
  s += '\n';
  s += timeframe.label_text();
  return s;
}

std::string QueryKey::stable_hash() const { return hex64(fnv1a64(canonical())); }

TrendSeries normalize_series(const RawSeries& raw, std::string keyword) {
  if (raw.points.empty()) {
    throw Error(ErrorKind::EmptySeries, "series for '" + keyword + "' is empty");
  }
  std::vector<double> values;
  values.reserve(raw.points.size());
  for (std::size_t i = 0; i < raw.points.size(); ++i) {
    if (i > 0 && raw.points[i].time <= raw.points[i - 1].time) {
      throw Error(ErrorKind::FixtureInvalid, "timestamps of '" + keyword + "' are not increasing");
    }
    values.push_back(raw.points[i].value);
  }
  check_values(values, "series '" + keyword + "'");
  const auto scaled = scale_to_100(values);
  TrendSeries out{std::move(keyword), {}};
  out.points.reserve(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) out.points.push_back({raw.points[i].time, scaled[i]});
  return out;
}

RegionInterestTable normalize_regions(const std::map<std::string, double>& raw, std::string keyword) {
  if (raw.empty()) {
    throw Error(ErrorKind::EmptySeries, "regional table for '" + keyword + "' is empty");
  }
  std::vector<double> values;
  values.reserve(raw.size());
  for (const auto& [code, v] : raw) values.push_back(v);
  check_values(values, "regions of '" + keyword + "'");
  const auto scaled = scale_to_100(values);
  RegionInterestTable out{std::move(keyword), {}};
  std::size_t i = 0;
  for (const auto& [code, v] : raw) out.rows.emplace(code, scaled[i++]);
  return out;
}

bool is_normalized(const std::vector<double>& values) {
  double max = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0 || v > 100.0) return false;
    max = std::max(max, v);
  }
  return max == 0.0 || max == 100.0;
}

void validate_normalized(const TrendSeries& series) {
  std::vector<double> values;
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    if (i > 0 && series.points[i].time <= series.points[i - 1].time) {
      throw Error(ErrorKind::FixtureInvalid,
                  "timestamps of '" + series.keyword + "' are not increasing");
    }
    values.push_back(series.points[i].interest);
  }
  if (values.empty()) {
    throw Error(ErrorKind::EmptySeries, "series for '" + series.keyword + "' is empty");
  }
  if (!is_normalized(values)) {
    throw Error(ErrorKind::FixtureInvalid,
                "series for '" + series.keyword + "' is not normalized to a maximum of 100");
  }
}

void validate_normalized(const RegionInterestTable& table) {
  std::vector<double> values;
  for (const auto& [code, v] : table.rows) values.push_back(v);
  if (values.empty()) {
    throw Error(ErrorKind::EmptySeries, "regional table for '" + table.keyword + "' is empty");
  }
  if (!is_normalized(values)) {
    throw Error(ErrorKind::FixtureInvalid,
                "regions for '" + table.keyword + "' are not normalized to a maximum of 100");
  }
}

std::vector<std::vector<std::string>> batch_keywords(const std::vector<std::string>& keywords,
                                                     std::size_t max_per_request) {
  if (max_per_request == 0) {
    throw Error(ErrorKind::InvalidArgument, "max_per_request must be >= 1");
  }
  std::vector<std::vector<std::string>> batches;
  for (std::size_t i = 0; i < keywords.size(); i += max_per_request) {
    const auto end = std::min(keywords.size(), i + max_per_request);
    batches.emplace_back(keywords.begin() + static_cast<std::ptrdiff_t>(i),
                         keywords.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

}  // namespace idealize::trends
