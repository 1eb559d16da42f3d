#include <algorithm>
#include <random>

#include "doctest.h"
#include "idealize/error.hpp"
#include "idealize/text_pipeline.hpp"
#include "test_support.hpp"

using namespace idealize;
using namespace idealize::text;

namespace {

std::vector<std::string> norms(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.norm);
  return out;
}

std::vector<TaggedToken> tagged(std::initializer_list<std::tuple<std::string, PosTag, std::size_t>> items) {
  std::vector<TaggedToken> out;
  for (const auto& [w, tag, pos] : items) out.push_back({{w, w, pos, true}, tag});
  return out;
}

}  // namespace

TEST_CASE("tokenize splits words, punctuation and numbers") {
  CHECK(tokenize("").empty());
  CHECK(tokenize(" \t\n ").empty());

  const auto t = tokenize("Business ideas thrive.");
  REQUIRE(t.size() == 4);
  CHECK(t[0] == Token{"Business", "business", 0, true});
  CHECK(t[1] == Token{"ideas", "ideas", 1, true});
  CHECK(t[2] == Token{"thrive", "thrive", 2, true});
  CHECK(t[3] == Token{".", ".", 3, false});

  const auto n = tokenize("42 stores, 7 brands");
  REQUIRE(n.size() == 5);
  CHECK_FALSE(n[0].is_word);
  CHECK(n[1].is_word);
  CHECK_FALSE(n[2].is_word);
  CHECK(n[2].surface == ",");
  CHECK_FALSE(n[3].is_word);
  CHECK(n[4].norm == "brands");
}

TEST_CASE("tokenize splits at hyphens, brackets and quotes") {
  const auto t = tokenize("e-commerce (online) store's \"best\"");
  REQUIRE(t.size() >= 3);
  CHECK(t[0].norm == "e");
  CHECK(t[1].surface == "-");
  CHECK_FALSE(t[1].is_word);
  CHECK(t[2].norm == "commerce");
  std::vector<std::string> words;
  for (const auto& tok : t) {
    if (tok.is_word) words.push_back(tok.norm);
  }
  CHECK(std::find(words.begin(), words.end(), "online") != words.end());
  CHECK(std::find(words.begin(), words.end(), "best") != words.end());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i].position == i);
}

TEST_CASE("tokenize handles non-ASCII letters and whitespace") {
  const auto t = tokenize("Ça VA Über ÀÉÎ");
  REQUIRE(t.size() == 4);
  CHECK(t[0].norm == "ça");
  CHECK(t[1].norm == "va");
  CHECK(t[2].norm == "über");
  CHECK(t[3].norm == "àéî");
  CHECK(case_fold("ŸŁ") == "ÿł");
}

TEST_CASE("filter_stopwords keeps original positions") {
  Stoplist stop({"the"});
  const auto tokens = tokenize("the best service");
  const auto kept = filter_stopwords(tokens, stop);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].norm == "best");
  CHECK(kept[0].position == 1);
  CHECK(kept[1].position == 2);
  CHECK(filter_stopwords({}, stop).empty());
}

TEST_CASE("bundled stoplist removes function words from Input Text II") {
  const auto stop = bundled_stoplist();
  const auto tokens = tokenize(testing::idea_text(2));
  const auto kept = norms(filter_stopwords(tokens, *stop));
  for (const char* w : {"our", "the", "we", "all", "as", "per"}) {
    CHECK_MESSAGE(std::find(kept.begin(), kept.end(), w) == kept.end(), w);
    CHECK(stop->contains(w));
  }
  for (const char* w : {"service", "parts", "maintenance", "business", "idea", "best"}) {
    CHECK_FALSE_MESSAGE(stop->contains(w), w);
  }
}

TEST_CASE("Input Text II survivors match the recorded golden list") {
  const auto kept = norms(filter_stopwords(tokenize(testing::idea_text(2)), *bundled_stoplist()));
  std::string joined;
  for (const auto& w : kept) joined += w + "\n";
  CHECK(joined == read_file(testing::test_data_dir() / "input_text_2.stopfiltered.txt"));
}

TEST_CASE("pos_tag uses the lexicon then suffix rules") {
  const auto tagger = bundled_tagger();
  const auto one = [&](const std::string& w) { return pos_tag(tokenize(w), *tagger).at(0).tag; };
  CHECK(one("maintenance") == PosTag::Noun);
  CHECK(one("zzzqx") == PosTag::Other);
  CHECK(one("happiness") == PosTag::Noun);
  CHECK(one("blorpification") == PosTag::Noun);
  CHECK(one("glorpous") == PosTag::Adjective);
  CHECK(one("snarkful") == PosTag::Adjective);
  CHECK(one("tunning") == PosTag::Noun);

  CHECK(LexiconTagger::suffix_fallback("ness") == PosTag::Other);
  CHECK(LexiconTagger::suffix_fallback("frobnicate") == PosTag::Other);

  const auto punct = pos_tag(tokenize("a , 12"), *tagger);
  CHECK(punct[1].tag == PosTag::Other);
  CHECK(punct[2].tag == PosTag::Other);
}

TEST_CASE("pos_tag with an explicit lexicon") {
  TagLexicon lex;
  lex.insert("serve", PosTag::Verb);
  lex.insert("best", PosTag::Adjective);
  const auto out = pos_tag(tokenize("best serve kindness"), lex);
  REQUIRE(out.size() == 3);
  CHECK(out[0].tag == PosTag::Adjective);
  CHECK(out[1].tag == PosTag::Verb);
  CHECK(out[2].tag == PosTag::Noun);
}

TEST_CASE("lexicon loading failures") {
  testing::TempDir dir;
  CHECK_THROWS_AS(TagLexicon::load(dir.path() / "missing.tsv"), Error);
  try {
    TagLexicon::load(dir.path() / "missing.tsv");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LexiconUnavailable);
  }
  write_file_atomic(dir.path() / "bad.tsv", "word\tNOUN\nbroken line\n");
  try {
    TagLexicon::load(dir.path() / "bad.tsv");
    FAIL("expected LexiconUnavailable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LexiconUnavailable);
  }
  write_file_atomic(dir.path() / "tag.tsv", "word\tPRONOUN\n");
  CHECK_THROWS_AS(TagLexicon::load(dir.path() / "tag.tsv"), Error);
}

TEST_CASE("candidate_filter keeps nouns and adjectives and merges norms") {
  const auto c = candidate_filter(tagged({{"best", PosTag::Adjective, 0},
                                          {"service", PosTag::Noun, 1},
                                          {"serve", PosTag::Verb, 2}}));
  REQUIRE(c.size() == 2);
  CHECK(c[0].norm == "best");
  CHECK(c[1].norm == "service");

  const auto m = candidate_filter(tagged({{"idea", PosTag::Noun, 3}, {"idea", PosTag::Noun, 9}}));
  REQUIRE(m.size() == 1);
  CHECK(m[0].positions == std::vector<std::size_t>{3, 9});
  CHECK(candidate_filter({}).empty());
}

TEST_CASE("pipeline properties over the idea corpus") {
  const auto stop = bundled_stoplist();
  const auto tagger = bundled_tagger();
  for (int n : {1, 2}) {
    const auto text = testing::idea_text(n);
    const auto tokens = tokenize(text);
    const auto run = [&](const Stoplist& s) { return candidate_filter(pos_tag(filter_stopwords(tokens, s), *tagger)); };
    const auto candidates = run(*stop);

    // determinism
    CHECK(candidates == run(*stop));
    // position integrity
    for (const auto& c : candidates) {
      REQUIRE_FALSE(c.positions.empty());
      CHECK(std::is_sorted(c.positions.begin(), c.positions.end()));
      for (auto p : c.positions) CHECK(tokens.at(p).norm == c.norm);
    }
    // tag totality
    const auto filtered = filter_stopwords(tokens, *stop);
    CHECK(pos_tag(filtered, *tagger).size() == filtered.size());
    // monotonicity: each extra stop word never adds candidates
    Stoplist grown = *stop;
    std::size_t previous = candidates.size();
    for (const auto& c : candidates) {
      grown.insert(c.norm);
      const auto now = run(grown).size();
      CHECK(now <= previous);
      previous = now;
    }
    CHECK(previous == 0);
  }
}

TEST_CASE("tokenize positions are contiguous on random text") {
  std::mt19937 rng(7);
  const std::string alphabet = "abc XYZ,.;!?0123 \t\n-'\"";
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    const int len = static_cast<int>(rng() % 60);
    for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    const auto t = tokenize(s);
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(t[i].position == i);
      CHECK(!t[i].surface.empty());
      CHECK(t[i].norm == case_fold(t[i].surface));
    }
  }
}
