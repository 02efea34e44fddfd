#pragma once

// Random input generators shared by the property-style tests.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "kgdf/kg/graph.hpp"
#include "kgdf/text.hpp"

namespace kgdf::testing {

inline std::string random_word(std::mt19937_64& rng, std::size_t min_len = 1, std::size_t max_len = 8) {
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.";
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string w;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) w.push_back(kAlphabet[pick(rng)]);
  return w;
}

// Free text for objects: may contain commas, parentheses, hashes and
// non-ASCII characters, but no control characters.
inline std::string random_object(std::mt19937_64& rng) {
  static const std::vector<std::string> kPieces = {
      "a",  "small", "red",  "dress", ",", "(",  ")",  "#",   " ",    "Mr.", "Mime", "é",
      "—",  "x,y",   "(b)",  "()",    ":", "->", "’s", "100%", "[1]", "{",   "}",    "\""};
  std::uniform_int_distribution<std::size_t> count(1, 8);
  std::uniform_int_distribution<std::size_t> pick(0, kPieces.size() - 1);
  std::string s;
  for (std::size_t i = 0, n = count(rng); i < n; ++i) {
    if (!s.empty() && rng() % 2) s.push_back(' ');
    s += kPieces[pick(rng)];
  }
  if (std::string_view(s).find_first_not_of(' ') == std::string_view::npos) s = "x";
  return s;
}

// Ontology used by the randomized graph tests: two concepts and one
// relation per (domain, range-kind) combination.
inline kg::Ontology random_test_ontology() {
  kg::Ontology o("testgame");
  o.add_concept("A");
  o.add_concept("B");
  o.add_relation({"a_lit", "A", "literal"});
  o.add_relation({"a_to_b", "A", "B"});
  o.add_relation({"a_to_a", "A", "A"});
  o.add_relation({"b_lit", "B", "literal"});
  o.add_relation({"b_to_b", "B", "B"});
  return o;
}

// Inserts up to `attempts` random triples; invalid ones are skipped, which
// exercises the validator along the way.
inline kg::KnowledgeGraph random_graph(std::mt19937_64& rng, std::size_t attempts) {
  kg::KnowledgeGraph g("testgame", random_test_ontology());
  const auto& relations = g.ontology().relations();
  std::uniform_int_distribution<int> entity(0, 24);
  std::uniform_int_distribution<std::size_t> rel(0, relations.size() - 1);
  static const kg::ProvenanceKind kKinds[] = {kg::ProvenanceKind::Manual, kg::ProvenanceKind::PatternExtracted,
                                              kg::ProvenanceKind::LlmExtracted};
  for (std::size_t i = 0; i < attempts; ++i) {
    const auto& r = relations[rel(rng)];
    std::string subject = "E" + std::to_string(entity(rng));
    if (rng() % 3 == 0) subject = "e" + subject.substr(1);  // case variants
    std::string object = r.literal_range() ? random_object(rng) : "E" + std::to_string(entity(rng));
    kg::Provenance p{kKinds[rng() % 3], "doc-" + std::to_string(rng() % 5), rng() % 2 ? "tool-v1" : ""};
    try {
      g.insert(kg::Triple(subject, r.name, object, p));
    } catch (const Error&) {
    }
  }
  return g;
}

// Triple keys of an entity's subgraph found by scanning every triple.
inline std::multiset<std::string> linear_scan_subgraph(const kg::KnowledgeGraph& g, const std::string& entity, int depth) {
  std::set<std::string> frontier{to_lower_ascii(entity)};
  std::set<std::string> all = frontier;
  if (depth == 2) {
    for (const auto& t : g.triples())
      if (to_lower_ascii(t.subject()) == to_lower_ascii(entity) && g.index().find(t.object()) != nullptr)
        all.insert(to_lower_ascii(t.object()));
  }
  std::multiset<std::string> out;
  for (const auto& t : g.triples())
    if (all.count(to_lower_ascii(t.subject()))) out.insert(t.key());
  return out;
}

}  // namespace kgdf::testing
