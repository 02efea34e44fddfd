#include "kgdf/grounding/lexicon.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

namespace kgdf::grounding {

namespace {

struct CodePoint {
  std::uint32_t value;
  std::size_t start;
  std::size_t end;
};

// Decodes UTF-8; a malformed byte becomes U+FFFD (treated as punctuation).
std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 0;
    std::uint32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto c = static_cast<unsigned char>(s[i + k]);
      if ((c >> 6) != 0x2) ok = false;
      cp = (cp << 6) | (c & 0x3F);
    }
    if (!ok) {
      out.push_back({0xFFFD, i, i + 1});
      ++i;
    } else {
      out.push_back({cp, i, i + len});
      i += len;
    }
  }
  return out;
}

bool is_apostrophe(std::uint32_t cp) { return cp == '\'' || cp == 0x2019; }

bool is_word_cp(std::uint32_t cp) {
  if (cp < 0x80) return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp == 0xFFFD || cp == 0x00A0 || cp == 0x3000 || cp == 0xFEFF) return false;
  if (cp >= 0x00A1 && cp <= 0x00BF && cp != 0x00AA && cp != 0x00B2 && cp != 0x00B3 && cp != 0x00B5 &&
      cp != 0x00B9 && cp != 0x00BA)
    return false;  // Latin-1 punctuation and symbols
  if (cp == 0x00D7 || cp == 0x00F7) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation, dashes, quotes, ellipsis
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF01 && cp <= 0xFF0F) return false;
  return true;
}

bool is_joiner(std::uint32_t cp) { return cp == '-' || is_apostrophe(cp); }

void append_utf8(std::string& out, std::string_view source, const CodePoint& c) {
  out.append(source.substr(c.start, c.end - c.start));
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  const auto cps = decode(text);
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_word_cp(cps[i].value)) {
      ++i;
      continue;
    }
    Token t;
    t.start = cps[i].start;
    std::size_t j = i;
    for (;;) {
      const auto cp = cps[j].value;
      if (is_apostrophe(cp)) {
        // dropped from the normalized form
      } else if (cp < 0x80) {
        t.norm.push_back(static_cast<char>(cp >= 'A' && cp <= 'Z' ? cp - 'A' + 'a' : cp));
      } else {
        append_utf8(t.norm, text, cps[j]);
      }
      if (j + 1 < cps.size() && is_word_cp(cps[j + 1].value)) {
        ++j;
      } else if (j + 2 < cps.size() && is_joiner(cps[j + 1].value) && is_word_cp(cps[j + 2].value)) {
        ++j;
      } else {
        break;
      }
    }
    t.end = cps[j].end;
    tokens.push_back(std::move(t));
    i = j + 1;
  }
  return tokens;
}

const std::vector<std::string>& stopwords() {
  static const std::vector<std::string> words = {
      "a",     "about", "after", "all",   "am",    "an",    "and",   "are",   "as",    "at",    "be",
      "been",  "before", "but",  "by",    "can",   "did",   "do",    "does",  "for",   "from",  "had",
      "has",   "have",  "he",    "her",   "him",   "his",   "i",     "if",    "im",    "in",    "into",
      "is",    "it",    "its",   "just",  "me",    "my",    "no",    "not",   "of",    "on",    "or",
      "our",   "she",   "so",    "than",  "that",  "the",   "their", "them",  "then",  "there", "these",
      "they",  "this",  "those", "to",    "upon",  "us",    "very",  "was",   "we",    "were",  "what",
      "when",  "while", "will",  "with",  "would", "you",   "your",  "youre", "ill",   "ive",   "lets"};
  return words;
}

bool is_stopword(std::string_view norm) {
  static const std::unordered_set<std::string_view> set = [] {
    std::unordered_set<std::string_view> s;
    for (const auto& w : stopwords()) s.insert(w);
    return s;
  }();
  return set.count(norm) > 0;
}

void Lexicon::add(const std::vector<std::string>& tokens, const std::string& source) {
  if (tokens.empty()) return;
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key += ' ';
    key += t;
  }
  auto& sources = entries_[key];
  if (std::find(sources.begin(), sources.end(), source) == sources.end()) sources.push_back(source);
  max_tokens_ = std::max(max_tokens_, tokens.size());
}

const std::vector<std::string>* Lexicon::sources(std::string_view lexeme) const {
  auto it = entries_.find(std::string(lexeme));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string triple_id(const kg::Triple& t) { return kg::serialize_triple(t); }

Lexicon build_knowledge_lexicon(const std::vector<kg::Triple>& triples) {
  Lexicon lex;
  for (const auto& t : triples) {
    const auto id = triple_id(t);
    std::vector<std::string> phrase;
    bool has_content = false;
    for (auto& tok : tokenize(t.object())) {
      has_content = has_content || !is_stopword(tok.norm);
      phrase.push_back(std::move(tok.norm));
    }
    if (!has_content) continue;
    lex.add(phrase, id);
    for (const auto& w : phrase)
      if (!is_stopword(w)) lex.add({w}, id);
  }
  return lex;
}

Lexicon build_situation_lexicon(std::string_view scenario_text) {
  Lexicon lex;
  const std::string source(kScenarioSource);
  const auto tokens = tokenize(scenario_text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_stopword(tokens[i].norm)) continue;
    lex.add({tokens[i].norm}, source);
    if (i + 1 < tokens.size() && !is_stopword(tokens[i + 1].norm)) lex.add({tokens[i].norm, tokens[i + 1].norm}, source);
  }
  return lex;
}

}  // namespace kgdf::grounding
