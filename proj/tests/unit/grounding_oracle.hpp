#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kgdf/grounding/annotate.hpp"
#include "kgdf/kg/kg_file.hpp"
#include "kgdf/prompt/scenario.hpp"
#include "kgdf/text.hpp"
#include "test_paths.hpp"

namespace kgdf::testing {

using grounding::GroundingAnnotation;
using grounding::Label;
using grounding::Lexicon;
using grounding::Token;

// Independent oracle. Tokens are found by blanking every non-word code point
// (joiners survive only between two word code points) and splitting on the
// blanks; annotation enumerates every token run, collects all matches and
// resolves them by a full sort.

inline std::u32string to_u32(std::string_view s, std::vector<std::size_t>& byte_of) {
  std::u32string out;
  byte_of.clear();
  for (std::size_t i = 0; i < s.size();) {
    const unsigned char b = s[i];
    int len = 0;
    char32_t cp = 0;
    if (b < 0x80) len = 1, cp = b;
    else if (b >= 0xC0 && b < 0xE0) len = 2, cp = b & 0x1F;
    else if (b >= 0xE0 && b < 0xF0) len = 3, cp = b & 0x0F;
    else if (b >= 0xF0 && b < 0xF8) len = 4, cp = b & 0x07;
    bool ok = len > 0 && i + len <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      const unsigned char c = s[i + k];
      ok = (c & 0xC0) == 0x80;
      cp = (cp << 6) | (c & 0x3F);
    }
    if (!ok) len = 1, cp = 0xFFFD;
    out.push_back(cp);
    byte_of.push_back(i);
    i += len;
  }
  byte_of.push_back(s.size());
  return out;
}

inline bool oracle_word(char32_t c) {
  if (c < 0x80) return std::isalnum(static_cast<int>(c)) != 0;
  static const std::set<char32_t> latin1_letters = {0xAA, 0xB2, 0xB3, 0xB5, 0xB9, 0xBA};
  if (c >= 0xA1 && c <= 0xBF) return latin1_letters.count(c) > 0;
  if (c == 0xA0 || c == 0xD7 || c == 0xF7 || c == 0xFFFD || c == 0xFEFF) return false;
  if ((c >= 0x2000 && c <= 0x206F) || (c >= 0x3000 && c <= 0x303F) || (c >= 0xFE30 && c <= 0xFE4F) ||
      (c >= 0xFF01 && c <= 0xFF0F))
    return false;
  return true;
}

inline std::vector<Token> oracle_tokenize(std::string_view s) {
  std::vector<std::size_t> byte_of;
  const auto u = to_u32(s, byte_of);
  std::vector<bool> keep(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const bool joiner = u[i] == U'-' || u[i] == U'\'' || u[i] == U'’';
    keep[i] = oracle_word(u[i]) ||
              (joiner && i > 0 && i + 1 < u.size() && oracle_word(u[i - 1]) && oracle_word(u[i + 1]));
  }
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < u.size();) {
    if (!keep[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < u.size() && keep[j]) ++j;
    Token t{byte_of[i], byte_of[j], ""};
    for (std::size_t k = i; k < j; ++k) {
      if (u[k] == U'\'' || u[k] == U'’') continue;
      if (u[k] < 0x80)
        t.norm.push_back(static_cast<char>(std::tolower(static_cast<int>(u[k]))));
      else
        t.norm += std::string(s.substr(byte_of[k], byte_of[k + 1] - byte_of[k]));
    }
    tokens.push_back(t);
    i = j;
  }
  return tokens;
}

struct OracleSpan {
  std::size_t start, end;
  Label label;
  std::string lexeme;
  bool operator==(const OracleSpan&) const = default;
};

inline std::vector<OracleSpan> oracle_annotate(std::string_view text, const Lexicon& k, const Lexicon& s) {
  const auto toks = oracle_tokenize(text);
  struct Cand {
    std::size_t i, j;
    Label label;
    std::string key;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    std::string key;
    for (std::size_t j = i; j < toks.size(); ++j) {
      key += (j == i ? "" : " ") + toks[j].norm;
      if (k.contains(key))
        cands.push_back({i, j + 1, Label::Knowledge, key});
      else if (s.contains(key))
        cands.push_back({i, j + 1, Label::Situation, key});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.label != b.label) return a.label == Label::Knowledge;
    if (a.j - a.i != b.j - b.i) return a.j - a.i > b.j - b.i;
    return a.i < b.i;
  });
  std::vector<bool> used(toks.size(), false);
  std::vector<OracleSpan> out;
  for (const auto& c : cands) {
    if (std::any_of(used.begin() + c.i, used.begin() + c.j, [](bool u) { return u; })) continue;
    std::fill(used.begin() + c.i, used.begin() + c.j, true);
    out.push_back({toks[c.i].start, toks[c.j - 1].end, c.label, c.key});
  }
  std::sort(out.begin(), out.end(), [](const OracleSpan& a, const OracleSpan& b) { return a.start < b.start; });
  return out;
}

inline std::vector<OracleSpan> strip(const GroundingAnnotation& a) {
  std::vector<OracleSpan> out;
  for (const auto& s : a.spans) out.push_back({s.start, s.end, s.label, s.lexeme});
  return out;
}

// Fixture context

inline const kg::KnowledgeGraph& ffviir() {
  static const auto kg = kg::graph_from_triple_list(
      "ffviir", kg::load_ontology(testing::data_dir() / "ontology/ffviir.ont"),
      read_file(testing::data_dir() / "kg/ffviir.triples"), "ffviir.triples");
  return kg;
}

inline const kg::KnowledgeGraph& pokemon() {
  static const auto kg = kg::graph_from_triple_list(
      "pokemon", kg::load_ontology(testing::data_dir() / "ontology/pokemon.ont"),
      read_file(testing::data_dir() / "kg/pokemon.triples"), "pokemon.triples");
  return kg;
}

struct CorpusItem {
  std::string id;
  std::string text;
  std::vector<kg::Triple> triples;
  std::string scenario;
};

inline std::vector<CorpusItem> corpus() {
  std::vector<CorpusItem> out;
  for (auto [scen_file, resp_file] : {std::pair{"scenarios/ffviir_battles.json", "fixtures/ffviir_battles.responses.json"},
                                      std::pair{"scenarios/pokemon_personas.json",
                                                "fixtures/pokemon_personas.responses.json"}}) {
    auto responses = nlohmann::json::parse(read_file(testing::data_dir() / resp_file))["responses"];
    for (const auto& s : prompt::load_scenarios(testing::data_dir() / scen_file)) {
      std::vector<kg::Triple> triples;
      if (s.kind() == prompt::ScenarioKind::Battle) {
        triples = kg::subgraph(ffviir(), s.battle().speaker);
        auto boss = kg::subgraph(ffviir(), s.battle().boss);
        triples.insert(triples.end(), boss.begin(), boss.end());
      } else {
        triples = kg::subgraph(pokemon(), s.npc().npc);
      }
      for (const auto& r : responses.at(s.id)) out.push_back({s.id, r.get<std::string>(), triples, prompt::scenario_text(s)});
    }
  }
  return out;
}

// Random responses up to 200 code points drawn from lexicon words, stopwords,
// noise and punctuation, against fixture and random lexicons.
inline std::string random_response(std::mt19937_64& rng, const std::vector<std::string>& vocab) {
  static const std::vector<std::string> glue = {" ", " ", " ", ", ", "! ", "—", "… ", "-", "'", "’", " \"", "\n"};
  std::string out;
  std::size_t cps = 0;
  const auto target = std::uniform_int_distribution<std::size_t>(0, 200)(rng);
  while (true) {
    std::string word = vocab[rng() % vocab.size()];
    if (rng() % 5 == 0)
      for (auto& c : word) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    std::string piece = word + glue[rng() % glue.size()];
    std::size_t piece_cps = 0;
    for (unsigned char c : piece) piece_cps += (c & 0xC0) != 0x80;
    if (cps + piece_cps > target) break;
    out += piece;
    cps += piece_cps;
  }
  return out;
}

// Words a random response is drawn from: fixed noise plus the item's triple
// objects and scenario tokens.
inline std::vector<std::string> response_vocab(const CorpusItem& item) {
  std::vector<std::string> vocab = {"the", "and", "is", "on", "of", "your", "it's", "I'll", "pull", "back", "Pokémon",
                                    "core", "attacks", "zzz", "q", "health", "very", "low", "EM", "Mines", "Mine",
                                    "Toss", "auto-repair", "Auto", "Repair", "x-y", "café", "’s"};
  for (const auto& t : item.triples)
    for (const auto& tok : grounding::tokenize(t.object()))
      vocab.push_back(t.object().substr(tok.start, tok.end - tok.start));
  for (const auto& tok : grounding::tokenize(item.scenario))
    vocab.push_back(item.scenario.substr(tok.start, tok.end - tok.start));
  return vocab;
}

}  // namespace kgdf::testing
