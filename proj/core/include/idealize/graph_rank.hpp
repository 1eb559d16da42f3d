#pragma once

// TextRank over candidate words: directed co-occurrence graph, weighted
// PageRank, top-ratio selection and keyphrase collapse.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idealize/text_pipeline.hpp"

namespace idealize::rank {

struct KeywordGraph {
  std::set<std::string> nodes;
  /// (source, target) -> co-occurrence count >= 1. Never a self-edge.
  std::map<std::pair<std::string, std::string>, int> edges;

  bool operator==(const KeywordGraph&) const = default;
};

struct ScoredNode {
  std::string norm;
  double score = 0.0;
};

struct RankedKeyword {
  std::string text;
  double weight = 0.0;

  bool operator==(const RankedKeyword&) const = default;
};

struct PageRankParams {
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iterations = 100;
};

struct PageRankResult {
  std::vector<ScoredNode> nodes;  // lexicographic by norm
  bool converged = false;
  int iterations = 0;
  double max_delta = 0.0;
};

struct ExtractionConfig {
  int window = 2;
  double ratio = 1.0 / 3.0;
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iterations = 100;
  bool directed = true;
  // Null means the bundled English resources.
  std::shared_ptr<const text::Stoplist> stoplist;
  std::shared_ptr<const text::Tagger> tagger;
};

struct ExtractionResult {
  std::vector<RankedKeyword> keywords;
  std::size_t candidate_count = 0;
  bool converged = false;
  int iterations = 0;
};

/// Adds 1 to edge (earlier -> later) for every pair of candidate tokens whose
/// stream positions differ by less than `window`. Undirected mode adds both
/// directions. Throws Error(InvalidWindow) when window < 2.
KeywordGraph build_cooccurrence_graph(const std::vector<text::Candidate>& candidates,
                                      const std::vector<text::Token>& token_stream, int window,
                                      bool directed = true);

/// Weighted PageRank, Jacobi iteration from all-ones:
///   s(v) = (1 - d) + d * sum_{u -> v} w(u,v) / out(u) * s(u)
/// Dangling nodes keep the (1 - d) base and pass nothing on. Running out of
/// iterations is reported through `converged`, not an exception.
PageRankResult pagerank(const KeywordGraph& graph, const PageRankParams& params = {});

/// Top ceil(ratio * N) by score, ties lexicographic ascending.
std::vector<RankedKeyword> select_keywords(const std::vector<ScoredNode>& scored,
                                           double ratio = 1.0 / 3.0);

/// Merges maximal runs of selected keywords that sit next to each other in the
/// token stream. A phrase weighs the sum of its members; merged members are
/// dropped as standalone keywords. A run ends at any token that is not a
/// selected keyword (punctuation included) and before a word it already holds.
std::vector<RankedKeyword> collapse_keyphrases(const std::vector<RankedKeyword>& keywords,
                                               const std::vector<text::Token>& token_stream);

/// Sorts weight descending, text ascending on ties.
void sort_ranked(std::vector<RankedKeyword>& keywords);

ExtractionResult extract_detailed(std::string_view text, const ExtractionConfig& config = {});
std::vector<RankedKeyword> extract(std::string_view text, const ExtractionConfig& config = {});

}  // namespace idealize::rank
