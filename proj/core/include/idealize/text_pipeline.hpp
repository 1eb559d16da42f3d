#pragma once

// Raw idea text -> POS-filtered candidate words. Token positions index the
// full token stream (punctuation and stop words included), so later stages
// can measure adjacency in the original text.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace idealize::text {

struct Token {
  std::string surface;
  std::string norm;  // case-folded surface
  std::size_t position = 0;
  bool is_word = true;  // false for punctuation and pure numbers

  bool operator==(const Token&) const = default;
};

enum class PosTag { Noun, Adjective, Verb, Other };

std::string_view to_string(PosTag tag) noexcept;

struct TaggedToken {
  Token token;
  PosTag tag = PosTag::Other;

  bool operator==(const TaggedToken&) const = default;
};

struct Candidate {
  std::string norm;
  std::vector<std::size_t> positions;  // sorted, nonempty

  bool operator==(const Candidate&) const = default;
};

/// Case-folded stop words.
class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// One word per line; blank lines and `#` comments ignored. Words are case-folded on load.
  static Stoplist load(const std::filesystem::path& path);

  bool contains(std::string_view norm) const { return words_.count(std::string(norm)) > 0; }
  void insert(std::string word);
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// word -> most frequent coarse tag.
class TagLexicon {
 public:
  TagLexicon() = default;

  /// `word<TAB>TAG` per line with TAG in {NOUN, ADJ, VERB, OTHER}.
  /// Throws Error(LexiconUnavailable) on a missing file or a malformed line.
  static TagLexicon load(const std::filesystem::path& path);

  std::optional<PosTag> lookup(std::string_view norm) const;
  void insert(std::string word, PosTag tag);
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_map<std::string, PosTag> entries_;
};

/// Pluggable tagging backend.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual PosTag tag(std::string_view norm) const = 0;
};

/// Lexicon lookup, then suffix rules for unknown words, then Other.
class LexiconTagger final : public Tagger {
 public:
  explicit LexiconTagger(TagLexicon lexicon) : lexicon_(std::move(lexicon)) {}
  PosTag tag(std::string_view norm) const override;

  static PosTag suffix_fallback(std::string_view norm);

 private:
  TagLexicon lexicon_;
};

/// Simple lowercase for ASCII and the Latin-1/Latin Extended-A letters.
std::string case_fold(std::string_view utf8);

std::vector<Token> tokenize(std::string_view text);

std::vector<Token> filter_stopwords(const std::vector<Token>& tokens, const Stoplist& stoplist);

/// Tags every token; non-word tokens are tagged Other without a lookup.
std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const Tagger& tagger);
std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const TagLexicon& lexicon);

/// Keeps nouns and adjectives, merges equal norms, orders by first position.
std::vector<Candidate> candidate_filter(const std::vector<TaggedToken>& tagged);

/// Bundled English resources, loaded once from default_data_dir().
std::shared_ptr<const Stoplist> bundled_stoplist();
std::shared_ptr<const Tagger> bundled_tagger();

}  // namespace idealize::text
