#include "idealize/text_pipeline.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>

#include "idealize/error.hpp"
#include "idealize/util.hpp"

namespace idealize::text {
namespace {

// Decodes one code point; invalid bytes decode as U+FFFD and consume one byte.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) {
      i += 2;
      return static_cast<char32_t>(((b0 & 0x1F) << 6) | c1);
    }
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) {
      i += 3;
      return static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2);
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      i += 4;
      return static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3);
    }
  }
  ++i;
  return 0xFFFD;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_space(char32_t c) {
  return c == ' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000 || c == 0xFEFF;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  return (c >= 0xA1 && c <= 0xBF && c != 0xAA && c != 0xB5 && c != 0xBA) || c == 0xD7 ||
         c == 0xF7 || (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) || c == 0xFFFD;
}

char32_t fold(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if ((c >= 0xC0 && c <= 0xDE) && c != 0xD7) return c + 32;
  if (c == 0x178) return 0xFF;
  if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x131 && c != 0x138 && c != 0x149 &&
      c != 0x17F) {
    // Latin Extended-A alternates upper/lower, with the parity flipping at U+0139..U+0148 and
    // U+0179..U+017E.
    const bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    if (odd_upper ? (c % 2 == 1) : (c % 2 == 0)) return c + 1;
  }
  return c;
}

bool is_number(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<PosTag> parse_tag(std::string_view s) {
  if (s == "NOUN") return PosTag::Noun;
  if (s == "ADJ") return PosTag::Adjective;
  if (s == "VERB") return PosTag::Verb;
  if (s == "OTHER") return PosTag::Other;
  return std::nullopt;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() + 2 && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view to_string(PosTag tag) noexcept {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Adjective: return "ADJ";
    case PosTag::Verb: return "VERB";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

std::string case_fold(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) {
    append_utf8(out, fold(next_code_point(utf8, i)));
  }
  return out;
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open stoplist " + path.string());
  }
  Stoplist list;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    list.insert(line);
  }
  return list;
}

void Stoplist::insert(std::string word) { words_.insert(case_fold(word)); }

TagLexicon TagLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::LexiconUnavailable, "cannot open lexicon " + path.string());
  }
  TagLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    const auto tag = tab == std::string::npos ? std::nullopt
                                              : parse_tag(std::string_view(line).substr(tab + 1));
    if (tab == 0 || !tag) {
      throw Error(ErrorKind::LexiconUnavailable,
                  path.string() + ":" + std::to_string(line_no) + ": malformed entry");
    }
    lexicon.insert(line.substr(0, tab), *tag);
  }
  if (lexicon.size() == 0) {
    throw Error(ErrorKind::LexiconUnavailable, "lexicon " + path.string() + " is empty");
  }
  return lexicon;
}

std::optional<PosTag> TagLexicon::lookup(std::string_view norm) const {
  if (auto it = entries_.find(std::string(norm)); it != entries_.end()) {
    return it->second;
  }
  return std::nullopt;
}

void TagLexicon::insert(std::string word, PosTag tag) { entries_[case_fold(word)] = tag; }

PosTag LexiconTagger::tag(std::string_view norm) const {
  if (auto hit = lexicon_.lookup(norm)) {
    return *hit;
  }
  return suffix_fallback(norm);
}

PosTag LexiconTagger::suffix_fallback(std::string_view norm) {
  static constexpr std::array<std::string_view, 11> kNoun = {
      "ness", "tion", "sion", "ment", "ity", "ship", "ism", "ance", "ence", "hood", "dom"};
  static constexpr std::array<std::string_view, 7> kAdjective = {"ous",  "ful",  "ive", "able",
                                                                 "ible", "less", "ical"};
  static constexpr std::array<std::string_view, 3> kVerb = {"ize", "ise", "ify"};
  for (auto s : kNoun)
    if (ends_with(norm, s)) return PosTag::Noun;
  for (auto s : kAdjective)
    if (ends_with(norm, s)) return PosTag::Adjective;
  for (auto s : kVerb)
    if (ends_with(norm, s)) return PosTag::Verb;
  return PosTag::Other;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    Token t;
    t.norm = case_fold(word);
    t.is_word = !is_number(word);
    t.surface = std::move(word);
    t.position = tokens.size();
    tokens.push_back(std::move(t));
    word.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t start = i;
    const char32_t cp = next_code_point(text, i);
    if (is_space(cp)) {
      flush();
    } else if (is_punct(cp)) {
      flush();
      Token t;
      t.surface = std::string(text.substr(start, i - start));
      t.norm = t.surface;
      t.is_word = false;
      t.position = tokens.size();
      tokens.push_back(std::move(t));
    } else {
      word.append(text.substr(start, i - start));
    }
  }
  flush();
  return tokens;
}

std::vector<Token> filter_stopwords(const std::vector<Token>& tokens, const Stoplist& stoplist) {
  std::vector<Token> kept;
  kept.reserve(tokens.size());
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(kept),
               [&](const Token& t) { return !stoplist.contains(t.norm); });
  return kept;
}

std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const Tagger& tagger) {
  std::vector<TaggedToken> tagged;
  tagged.reserve(tokens.size());
  for (const auto& t : tokens) {
    tagged.push_back({t, t.is_word ? tagger.tag(t.norm) : PosTag::Other});
  }
  return tagged;
}

std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const TagLexicon& lexicon) {
  return pos_tag(tokens, LexiconTagger(lexicon));
}

std::vector<Candidate> candidate_filter(const std::vector<TaggedToken>& tagged) {
  std::vector<Candidate> out;
  std::map<std::string, std::size_t> index;
  for (const auto& tt : tagged) {
    if (!tt.token.is_word || (tt.tag != PosTag::Noun && tt.tag != PosTag::Adjective)) continue;
    auto [it, inserted] = index.try_emplace(tt.token.norm, out.size());
    if (inserted) out.push_back({tt.token.norm, {}});
    out[it->second].positions.push_back(tt.token.position);
  }
  for (auto& c : out) std::sort(c.positions.begin(), c.positions.end());
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.positions.front() < b.positions.front();
  });
  return out;
}

std::shared_ptr<const Stoplist> bundled_stoplist() {
  static const auto list =
      std::make_shared<const Stoplist>(Stoplist::load(default_data_dir() / "stopwords_en.txt"));
  return list;
}

std::shared_ptr<const Tagger> bundled_tagger() {
  static const std::shared_ptr<const Tagger> tagger =
      std::make_shared<const LexiconTagger>(TagLexicon::load(default_data_dir() / "lexicon_en.tsv"));
  return tagger;
}

}  // namespace idealize::text
