#include "kgdf/kg/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "kgdf/text.hpp"
#include "test_util.hpp"

namespace kgdf::kg {
namespace {

KnowledgeGraph sabrina_graph() {
  KnowledgeGraph kg("pokemon", load_ontology(testing::data_dir() / "ontology/pokemon.ont"));
  kg.insert(parse_triple("(Sabrina, has_gender, female)"));
  kg.insert(parse_triple("(Sabrina, has_outfit, a small red and dress black in the middle at the waist)"));
  kg.insert(parse_triple("(Sabrina, has_height, slim young woman)"));
  kg.insert(parse_triple("(Sabrina, has_pokemon, Mr. Mime)"));
  return kg;
}

TEST(ValidateTriple, AcceptsDeclaredRelationWithMatchingDomain) {
  auto kg = sabrina_graph();
  ASSERT_EQ(kg.index().find("Sabrina")->concept_name, "Character");
  auto verdict = validate_triple(parse_triple("(Sabrina, has_gender, female)"), kg.ontology(), kg.index());
  EXPECT_TRUE(verdict.ok) << verdict.message;
}

TEST(ValidateTriple, UnknownRelation) {
  auto kg = sabrina_graph();
  auto verdict = validate_triple(parse_triple("(Sabrina, has_salary, high)"), kg.ontology(), kg.index());
  EXPECT_FALSE(verdict.ok);
  EXPECT_EQ(verdict.rule, Errc::UnknownRelation);
}

TEST(ValidateTriple, DomainMismatch) {
  auto kg = sabrina_graph();
  ASSERT_EQ(kg.index().find("Mr. Mime")->concept_name, "Pokemon");
  auto verdict = validate_triple(parse_triple("(Mr. Mime, has_outfit, a striped costume)"), kg.ontology(), kg.index());
  EXPECT_EQ(verdict.rule, Errc::DomainMismatch);
}

TEST(ValidateTriple, RangeMismatch) {
  auto kg = sabrina_graph();
  // literal-ranged relation pointing at an indexed entity
  EXPECT_EQ(validate_triple(parse_triple("(Sabrina, has_gender, Mr. Mime)"), kg.ontology(), kg.index()).rule,
            Errc::RangeMismatch);
  // concept-ranged relation pointing at an entity of another concept
  EXPECT_EQ(validate_triple(parse_triple("(Sabrina, has_pokemon, Sabrina)"), kg.ontology(), kg.index()).rule,
            Errc::RangeMismatch);
}

// Every (subject concept, relation) pair: DomainMismatch must be reported
// exactly when the subject's concept differs from the relation's domain.
TEST(ValidateTriple, DomainCheckMatchesEnumeration) {
  auto ontology = load_ontology(testing::data_dir() / "ontology/pokemon.ont");
  EntityIndex index;
  int n = 0;
  for (const auto& c : ontology.concepts()) index.add("entity-of-" + c, c);
  for (const auto& c : ontology.concepts()) {
    for (const auto& r : ontology.relations()) {
      Triple t("entity-of-" + c, r.name, "fresh-object");
      auto verdict = validate_triple(t, ontology, index);
      const bool expect_domain_mismatch = c != r.domain;
      EXPECT_EQ(!verdict.ok && verdict.rule == Errc::DomainMismatch, expect_domain_mismatch) << c << " " << r.name;
      EXPECT_EQ(verdict.ok, !expect_domain_mismatch) << c << " " << r.name;
      ++n;
    }
  }
  EXPECT_EQ(n, 18);
}

TEST(ValidateTriple, TotalOverRandomTriples) {
  std::mt19937_64 rng(7);
  auto g = testing::random_graph(rng, 100);
  for (int i = 0; i < 500; ++i) {
    Triple t(testing::random_word(rng), testing::random_word(rng), testing::random_object(rng));
    auto verdict = validate_triple(t, g.ontology(), g.index());
    if (!verdict.ok) {
      EXPECT_TRUE(verdict.rule == Errc::UnknownRelation || verdict.rule == Errc::DomainMismatch ||
                  verdict.rule == Errc::RangeMismatch);
      EXPECT_FALSE(verdict.message.empty());
    }
  }
}

TEST(KnowledgeGraph, InsertIsIdempotent) {
  auto kg = sabrina_graph();
  EXPECT_EQ(kg.size(), 4u);
  EXPECT_EQ(kg.insert(parse_triple("(Sabrina, has_gender, female)")), InsertOutcome::Duplicate);
  EXPECT_EQ(kg.insert(parse_triple("(sabrina, HAS_GENDER, female)")), InsertOutcome::Duplicate);
  EXPECT_EQ(kg.size(), 4u);
  EXPECT_EQ(kg.insert(parse_triple("(Sabrina, has_gender, Female)")), InsertOutcome::Inserted);
  EXPECT_EQ(kg.size(), 5u);
}

TEST(KnowledgeGraph, DuplicateKeepsFirstProvenance) {
  KnowledgeGraph kg("pokemon", load_ontology(testing::data_dir() / "ontology/pokemon.ont"));
  kg.insert(Triple("Brock", "has_pokemon", "Onix", {ProvenanceKind::PatternExtracted, "brock.wiki", "rules-v1"}));
  kg.insert(Triple("Brock", "has_pokemon", "Onix", {ProvenanceKind::LlmExtracted, "brock.wiki", "extract-v1"}));
  ASSERT_EQ(kg.size(), 1u);
  EXPECT_EQ(kg.triples()[0].provenance().kind, ProvenanceKind::PatternExtracted);
}

TEST(KnowledgeGraph, InsertRejectsInvalidTriples) {
  auto kg = sabrina_graph();
  EXPECT_ERRC(kg.insert(parse_triple("(Sabrina, has_salary, high)")), Errc::UnknownRelation);
  EXPECT_ERRC(kg.insert(parse_triple("(Mr. Mime, has_outfit, stripes)")), Errc::DomainMismatch);
  EXPECT_EQ(kg.size(), 4u);
}

TEST(KnowledgeGraph, IndexedEntitiesAppearInTriples) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    auto g = testing::random_graph(rng, 200);
    for (const auto& [key, entry] : g.index()) {
      bool seen = std::any_of(g.triples().begin(), g.triples().end(), [&](const Triple& t) {
        return iequals(t.subject(), entry.id) || iequals(t.object(), entry.id);
      });
      EXPECT_TRUE(seen) << entry.id;
    }
  }
}

TEST(Subgraph, DepthOneReturnsEntityTriplesSorted) {
  auto kg = sabrina_graph();
  auto sub = subgraph(kg, "Sabrina", 1);
  ASSERT_EQ(sub.size(), 4u);
  EXPECT_EQ(sub[0].predicate(), "has_gender");
  EXPECT_EQ(sub[1].predicate(), "has_height");
  EXPECT_EQ(sub[2].predicate(), "has_outfit");
  EXPECT_EQ(sub[3].predicate(), "has_pokemon");
  EXPECT_EQ(subgraph(kg, "SABRINA", 1).size(), 4u);
}

TEST(Subgraph, ObjectOnlyEntityHasEmptyDepthOne) {
  auto kg = sabrina_graph();
  EXPECT_TRUE(subgraph(kg, "Mr. Mime", 1).empty());
}

TEST(Subgraph, DepthTwoFollowsIndexedObjects) {
  auto kg = sabrina_graph();
  kg.insert(parse_triple("(Mr. Mime, has_type, Psychic)"));
  kg.insert(parse_triple("(Brock, has_pokemon, Onix)"));
  auto sub = subgraph(kg, "Sabrina", 2);
  ASSERT_EQ(sub.size(), 5u);
  EXPECT_TRUE(std::count(sub.begin(), sub.end(), parse_triple("(Mr. Mime, has_type, Psychic)")) == 1);
  EXPECT_FALSE(std::count(sub.begin(), sub.end(), parse_triple("(Brock, has_pokemon, Onix)")));
}

TEST(Subgraph, Errors) {
  auto kg = sabrina_graph();
  EXPECT_ERRC(subgraph(kg, "Misty", 1), Errc::UnknownEntity);
  EXPECT_ERRC(subgraph(kg, "Sabrina", 3), Errc::InvalidArgument);
}

// Linear-scan / breadth-first oracle written independently of subgraph().
TEST(Subgraph, SoundAndCompleteAgainstLinearScan) {
  std::mt19937_64 rng(99);
  int cases = 0;
  for (int round = 0; round < 40; ++round) {
    auto g = testing::random_graph(rng, 150);
    for (const auto& [key, entry] : g.index()) {
      for (int depth : {1, 2}) {
        auto sub = subgraph(g, entry.id, depth);
        std::multiset<std::string> got;
        for (const auto& t : sub) got.insert(t.key());
        ASSERT_EQ(got, testing::linear_scan_subgraph(g, entry.id, depth)) << entry.id << " depth " << depth;
        if (depth == 1)
          for (const auto& t : sub) ASSERT_TRUE(iequals(t.subject(), entry.id));
        for (std::size_t i = 1; i < sub.size(); ++i) {
          auto a = std::make_pair(to_lower_ascii(sub[i - 1].predicate()), sub[i - 1].object());
          auto b = std::make_pair(to_lower_ascii(sub[i].predicate()), sub[i].object());
          ASSERT_LE(a, b);
        }
        ++cases;
      }
    }
  }
  EXPECT_GE(cases, 200);
}

}  // namespace
}  // namespace kgdf::kg
