#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kgdf/kg/triple.hpp"

namespace kgdf::grounding {

// A word token of a response or source text. Offsets are UTF-8 byte offsets
// into the original string; `norm` is the normalized form used for matching.
struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string norm;
  friend bool operator==(const Token&, const Token&) = default;
};

// Words are runs of letters and digits (any non-ASCII code point that is not
// punctuation or space counts as a letter). A hyphen or apostrophe between
// two word characters stays inside the word. Normalization lowercases ASCII
// and drops apostrophes, so "I'll" and "I’ll" both become "ill" while
// "Auto-Repair" becomes "auto-repair".
std::vector<Token> tokenize(std::string_view text);

inline constexpr std::string_view kStopwordsVersion = "stopwords-v1";
const std::vector<std::string>& stopwords();
bool is_stopword(std::string_view norm);

// Normalized token sequences joined by single spaces, each linked to the
// ids of the sources it came from (first source first).
class Lexicon {
 public:
  void add(const std::vector<std::string>& tokens, const std::string& source);

  bool contains(std::string_view lexeme) const { return entries_.find(std::string(lexeme)) != entries_.end(); }
  const std::vector<std::string>* sources(std::string_view lexeme) const;
  const std::map<std::string, std::vector<std::string>>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  // Length in tokens of the longest lexeme.
  std::size_t max_tokens() const noexcept { return max_tokens_; }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::size_t max_tokens_ = 0;
};

// Triple id used as a knowledge source: the serialized triple.
std::string triple_id(const kg::Triple& t);

// Each object's full token sequence (unless it is all stopwords) plus each of
// its content tokens. Subjects and predicates are left out.
Lexicon build_knowledge_lexicon(const std::vector<kg::Triple>& triples);

inline constexpr std::string_view kScenarioSource = "scenario";

// Content tokens of the scenario text plus bigrams of content tokens that are
// adjacent in the text.
Lexicon build_situation_lexicon(std::string_view scenario_text);

}  // namespace kgdf::grounding
