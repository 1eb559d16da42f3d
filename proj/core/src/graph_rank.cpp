#include "idealize/graph_rank.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "idealize/error.hpp"

namespace idealize::rank {

KeywordGraph build_cooccurrence_graph(const std::vector<text::Candidate>& candidates,
                                      const std::vector<text::Token>& token_stream, int window,
                                      bool directed) {
  if (window < 2) {
    throw Error(ErrorKind::InvalidWindow, "window must be >= 2, got " + std::to_string(window));
  }
  KeywordGraph graph;
  // position -> candidate norm, in stream order
  std::map<std::size_t, const std::string*> at;
  for (const auto& c : candidates) {
    graph.nodes.insert(c.norm);
    for (auto p : c.positions) {
      if (p < token_stream.size() && token_stream[p].norm != c.norm) {
        throw Error(ErrorKind::InvalidArgument,
                    "candidate '" + c.norm + "' does not match token " + std::to_string(p));
      }
      at[p] = &c.norm;
    }
  }
  const auto span = static_cast<std::size_t>(window);
  for (auto it = at.begin(); it != at.end(); ++it) {
    for (auto jt = std::next(it); jt != at.end() && jt->first - it->first < span; ++jt) {
      const std::string& from = *it->second;
      const std::string& to = *jt->second;
      if (from == to) continue;
      ++graph.edges[{from, to}];
      if (!directed) ++graph.edges[{to, from}];
    }
  }
  return graph;
}

PageRankResult pagerank(const KeywordGraph& graph, const PageRankParams& params) {
  if (graph.nodes.empty()) {
    throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
  }
  if (!(params.damping > 0.0 && params.damping < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "damping must be in (0,1)");
  }
  if (!(params.tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  }

  const std::size_t n = graph.nodes.size();
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> names(graph.nodes.begin(), graph.nodes.end());
  for (std::size_t i = 0; i < n; ++i) index.emplace(names[i], i);

  struct InEdge {
    std::size_t from;
    double share;  // w(u,v) / out(u)
  };
  std::vector<double> out_weight(n, 0.0);
  for (const auto& [edge, w] : graph.edges) {
    out_weight[index.at(edge.first)] += w;
  }
  std::vector<std::vector<InEdge>> incoming(n);
  for (const auto& [edge, w] : graph.edges) {
    const auto u = index.at(edge.first);
    incoming[index.at(edge.second)].push_back({u, w / out_weight[u]});
  }

  const double d = params.damping;
  std::vector<double> score(n, 1.0), next(n);
  PageRankResult result;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    double max_delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double sum = 0.0;
      for (const auto& e : incoming[v]) sum += e.share * score[e.from];
      next[v] = (1.0 - d) + d * sum;
      max_delta = std::max(max_delta, std::abs(next[v] - score[v]));
    }
    score.swap(next);
    result.iterations = iter + 1;
    result.max_delta = max_delta;
    if (max_delta < params.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) result.nodes.push_back({names[i], score[i]});
  return result;
}

void sort_ranked(std::vector<RankedKeyword>& keywords) {
  std::sort(keywords.begin(), keywords.end(), [](const RankedKeyword& a, const RankedKeyword& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.text < b.text;
  });
}

std::vector<RankedKeyword> select_keywords(const std::vector<ScoredNode>& scored, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "ratio must be in (0,1]");
  }
  std::vector<RankedKeyword> ranked;
  ranked.reserve(scored.size());
  for (const auto& s : scored) ranked.push_back({s.norm, s.score});
  sort_ranked(ranked);
  // The epsilon keeps ratio = 1/3 with N = 9 at exactly 3.
  const auto keep = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(scored.size()) - 1e-9));
  ranked.resize(std::min(ranked.size(), std::max<std::size_t>(keep, scored.empty() ? 0 : 1)));
  return ranked;
}

std::vector<RankedKeyword> collapse_keyphrases(const std::vector<RankedKeyword>& keywords,
                                               const std::vector<text::Token>& token_stream) {
  std::unordered_map<std::string, double> selected;
  for (const auto& k : keywords) selected.emplace(k.text, k.weight);

  std::vector<RankedKeyword> phrases;
  std::set<std::string> phrase_texts;
  std::set<std::string> consumed;
  std::vector<const std::string*> run;

  auto close_run = [&] {
    if (run.size() >= 2) {
      RankedKeyword phrase;
      for (const auto* w : run) {
        if (!phrase.text.empty()) phrase.text += ' ';
        phrase.text += *w;
        phrase.weight += selected.at(*w);
        consumed.insert(*w);
      }
      if (phrase_texts.insert(phrase.text).second) phrases.push_back(std::move(phrase));
    }
    run.clear();
  };

  for (const auto& tok : token_stream) {
    const bool hit = tok.is_word && selected.count(tok.norm) > 0;
    if (!hit) {
      close_run();
      continue;
    }
    const bool repeat = std::any_of(run.begin(), run.end(),
                                    [&](const std::string* w) { return *w == tok.norm; });
    if (repeat) close_run();
    run.push_back(&tok.norm);
  }
  close_run();

  std::vector<RankedKeyword> out = std::move(phrases);
  for (const auto& k : keywords) {
    if (!consumed.count(k.text)) out.push_back(k);
  }
  sort_ranked(out);
  return out;
}

ExtractionResult extract_detailed(std::string_view text, const ExtractionConfig& config) {
  const auto stoplist = config.stoplist ? config.stoplist : text::bundled_stoplist();
  const auto tagger = config.tagger ? config.tagger : text::bundled_tagger();

  const auto tokens = text::tokenize(text);
  const auto kept = text::filter_stopwords(tokens, *stoplist);
  const auto candidates = text::candidate_filter(text::pos_tag(kept, *tagger));
  if (candidates.empty()) {
    throw Error(ErrorKind::EmptyExtraction, "no noun or adjective survives filtering");
  }

  const auto graph = build_cooccurrence_graph(candidates, tokens, config.window, config.directed);
  const auto ranked = pagerank(graph, {config.damping, config.tolerance, config.max_iterations});

  ExtractionResult result;
  result.candidate_count = candidates.size();
  result.converged = ranked.converged;
  result.iterations = ranked.iterations;
  result.keywords = collapse_keyphrases(select_keywords(ranked.nodes, config.ratio), tokens);
  return result;
}

std::vector<RankedKeyword> extract(std::string_view text, const ExtractionConfig& config) {
  return extract_detailed(text, config).keywords;
}

}  // namespace idealize::rank
