// fixturegen: writes synthetic trend fixtures for the top keywords of idea texts.
//
// Every value derives from the query key's stable hash, so rerunning the tool
// reproduces the bundled fixture set byte for byte. Values are raw counts; the
// fixture source normalizes them on load.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <set>

#include "CLI11.hpp"
#include "idealize/analysis.hpp"
#include "idealize/error.hpp"
#include "idealize/trends_source.hpp"

namespace fs = std::filesystem;
using namespace idealize;

namespace {

// Regions for worldwide queries.
const std::vector<std::string> kWorldRegions = {"AR", "AU", "BR", "CA", "DE", "ES", "FR", "GB", "IN",
                                                "IT", "JP", "MX", "NG", "PH", "US", "ZA"};

// mt19937_64 is fully specified by the standard; the distributions are not,
// so draws are mapped to [0, 1) by hand to keep output identical everywhere.
class Draws {
 public:
  explicit Draws(const std::string& seed) : engine_(fnv1a64(seed)) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

trends::RawSeries make_series(const trends::QueryKey& key, UnixSeconds anchor) {
  Draws d(key.canonical() + "\nseries");
  const auto [start, end] = key.timeframe.span(anchor);
  const auto step = key.timeframe.resolution_seconds();
  const double base = d.uniform(200.0, 2000.0);
  const double slope = d.uniform(-0.6, 0.9);  // relative drift over the window
  const double season = d.uniform(0.05, 0.35);
  const double phase = d.uniform(0.0, 2.0 * std::numbers::pi);
  const double noise = d.uniform(0.02, 0.15);
  constexpr double kYear = 365.25 * 86400.0;

  trends::RawSeries raw;
  const double span = static_cast<double>(end - start);
  for (UnixSeconds t = end - ((end - start) / step) * step; t <= end; t += step) {
    const double x = static_cast<double>(t - start) / span;
    const double seasonal = 1.0 + season * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / kYear + phase);
    const double jitter = 1.0 + noise * (2.0 * d.uniform() - 1.0);
    const double v = base * (1.0 + slope * x) * seasonal * jitter;
    raw.points.push_back({t, std::round(std::max(0.0, v))});
  }
  return raw;
}

std::map<std::string, double> make_regions(const trends::QueryKey& key, const std::vector<std::string>& codes) {
  Draws d(key.canonical() + "\nregions");
  std::map<std::string, double> out;
  for (const auto& code : codes) out[code] = std::round(d.uniform(50.0, 600.0));
  // A few regions where the keyword is unusually popular.
  const int hot = 1 + static_cast<int>(d.uniform() * 3.0);
  for (int i = 0; i < hot; ++i) {
    const auto& code = codes[static_cast<std::size_t>(d.uniform() * static_cast<double>(codes.size()))];
    out[code] = std::round(out[code] * d.uniform(1.5, 3.0));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate deterministic trend fixtures for the keywords of idea texts"};
  std::vector<std::string> text_files, timeframes, contexts = {"web"}, geos = {"US"};
  std::string out_dir, anchor_text = "2020-06-28", config_path;
  int max_keywords = 5;
  app.add_option("--text-file", text_files, "Idea texts whose top keywords get fixtures")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--timeframe", timeframes, "Timeframe labels (default: all nine)");
  app.add_option("--context", contexts, "Contexts")->capture_default_str();
  app.add_option("--geo", geos, "Geos (empty string for worldwide)")->capture_default_str();
  app.add_option("--max-keywords", max_keywords, "Keywords per text")->capture_default_str();
  app.add_option("--anchor", anchor_text, "Last timestamp of every series")->capture_default_str();
  app.add_option("--config", config_path, "Config used for extraction")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Fixture directory")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto anchor = parse_iso8601(anchor_text);
    if (timeframes.empty()) {
      for (auto label : trends::kAllTimeframes) timeframes.emplace_back(trends::Timeframe{label}.label_text());
    }
    auto config = config_path.empty() ? service::ServiceConfig{} : service::load_config(config_path);
    const auto stoplist = std::make_shared<const text::Stoplist>(text::Stoplist::load(config.resolved_stoplist()));
    const auto tagger =
        std::make_shared<const text::LexiconTagger>(text::TagLexicon::load(config.resolved_lexicon()));
    const auto capitals = scoring::CapitalTable::load(config.resolved_capitals());

    rank::ExtractionConfig xc;
    xc.window = config.window;
    xc.ratio = config.ratio;
    xc.damping = config.damping;
    xc.tolerance = config.tolerance;
    xc.max_iterations = config.max_iterations;
    xc.directed = config.directed;
    xc.stoplist = stoplist;
    xc.tagger = tagger;

    std::set<std::string> keywords;
    for (const auto& path : text_files) {
      const auto ranked = rank::extract(read_file(path), xc);
      for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(max_keywords); ++i) {
        keywords.insert(ranked[i].text);
      }
    }

    fs::create_directories(out_dir);
    std::size_t written = 0;
    for (const auto& geo : geos) {
      std::vector<std::string> codes;
      if (geo.empty()) {
        codes = kWorldRegions;
      } else if (const auto* country = capitals.find(geo)) {
        for (const auto& [code, c] : country->regions) codes.push_back(code);
      } else {
        throw Error(ErrorKind::UnknownGeo, "no regions known for geo '" + geo + "'");
      }
      for (const auto& ctx : contexts) {
        const auto context = trends::parse_context(ctx);
        if (!context) throw Error(ErrorKind::InvalidArgument, "unknown context '" + ctx + "'");
        for (const auto& label : timeframes) {
          const auto timeframe = trends::Timeframe::from_label(label);
          if (!timeframe) throw Error(ErrorKind::InvalidArgument, "unknown timeframe '" + label + "'");
          for (const auto& keyword : keywords) {
            trends::FixtureRecord record;
            record.key = {keyword, geo, *context, *timeframe};
            record.key.validate();
            record.raw_series = make_series(record.key, anchor);
            record.raw_regions = make_regions(record.key, codes);
            write_file_atomic(trends::fixture_path(out_dir, record.key), trends::fixture_to_json(record));
            ++written;
          }
        }
      }
    }
    std::cerr << "fixturegen: wrote " << written << " fixtures for " << keywords.size() << " keywords to "
              << out_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "fixturegen: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
