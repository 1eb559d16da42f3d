// Throughput of the pipeline stages on the bundled idea texts and on
// synthetic inputs sized by the benchmark argument.

#include <benchmark/benchmark.h>

#include <random>

#include "idealize/analysis.hpp"
#include "idealize/util.hpp"

using namespace idealize;

namespace {

std::string idea_text(int n) {
  return read_file(std::string(IDEALIZE_SOURCE_DIR) + "/core/data/ideas/input_text_" + std::to_string(n) + ".txt");
}

// The bundled text repeated until it holds at least `words` words.
std::string long_text(std::size_t words) {
  const auto base = idea_text(1);
  std::string out;
  while (std::count(out.begin(), out.end(), ' ') < static_cast<std::ptrdiff_t>(words)) out += base + "\n";
  return out;
}

rank::KeywordGraph random_graph(int nodes, int out_degree) {
  std::mt19937_64 rng(42);
  rank::KeywordGraph g;
  std::vector<std::string> names;
  for (int i = 0; i < nodes; ++i) names.push_back("n" + std::to_string(i));
  g.nodes.insert(names.begin(), names.end());
  for (int i = 0; i < nodes; ++i) {
    for (int k = 0; k < out_degree; ++k) {
      const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(nodes));
      if (j != i) g.edges[{names[i], names[j]}] += 1;
    }
  }
  return g;
}

void BM_ExtractIdeaText(benchmark::State& state) {
  const auto text = idea_text(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rank::extract(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ExtractIdeaText)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void BM_ExtractLongText(benchmark::State& state) {
  const auto text = long_text(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rank::extract(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ExtractLongText)->Range(1 << 10, 1 << 15)->Unit(benchmark::kMillisecond);

void BM_PageRank(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(rank::pagerank(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PageRank)->RangeMultiplier(4)->Range(16, 4096)->Complexity()->Unit(benchmark::kMicrosecond);

void BM_AverageTrend(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  scoring::WeightedKeywordSet weights;
  std::map<std::string, trends::TrendSeries> series;
  for (std::size_t k = 0; k < n; ++k) {
    const auto name = "keyword " + std::to_string(k);
    weights.entries.push_back({name, 1.0 + static_cast<double>(k), 0.0});
    trends::TrendSeries s{name, {}};
    for (int i = 0; i < 261; ++i) s.points.push_back({1561939200 + i * 7 * 86400, static_cast<double>(rng() % 101)});
    series.emplace(name, std::move(s));
  }
  double total = 0.0;
  for (const auto& e : weights.entries) total += e.raw_weight;
  for (auto& e : weights.entries) e.nkw = e.raw_weight / total;
  for (auto _ : state) benchmark::DoNotOptimize(scoring::average_trend_per_idea(weights, series));
}
BENCHMARK(BM_AverageTrend)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMicrosecond);

// Full analysis against the bundled fixtures. The client's memo is warm after
// the first iteration, so this measures extraction, scoring and the report.
void BM_AnalyzeFixture(benchmark::State& state) {
  const service::Analyzer analyzer(service::ServiceConfig{});
  service::AnalysisRequest request;
  request.text = idea_text(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(service::serialize_report(analyzer.analyze(request)));
}
BENCHMARK(BM_AnalyzeFixture)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
