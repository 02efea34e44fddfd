#include "kgdf/kg/kg_file.hpp"

#include <gtest/gtest.h>

#include "generators.hpp"
#include "test_util.hpp"

namespace kgdf::kg {
namespace {

KnowledgeGraph fig_graph() {
  KnowledgeGraph kg("pokemon", load_ontology(testing::data_dir() / "ontology/pokemon.ont"));
  Provenance p{ProvenanceKind::PatternExtracted, "sabrina.txt", "rules-v1"};
  kg.insert(parse_triple("(Sabrina, has_gender, female)", p));
  kg.insert(parse_triple("(Sabrina, has_outfit, a small red and dress black in the middle at the waist)", p));
  kg.insert(parse_triple("(Sabrina, has_height, slim young woman)", p));
  kg.insert(parse_triple("(Sabrina, has_pokemon, Mr. Mime)", p));
  return kg;
}

void expect_same_provenance(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.triples()[i], b.triples()[i]);
    EXPECT_EQ(a.triples()[i].provenance(), b.triples()[i].provenance());
  }
}

TEST(KgFile, FourTripleGraphRoundTrips) {
  testing::TempDir dir;
  auto kg = fig_graph();
  persist(kg, dir / "sabrina.kg");
  auto back = load(dir / "sabrina.kg");
  EXPECT_TRUE(graph_equal(kg, back));
  expect_same_provenance(kg, back);
  EXPECT_EQ(serialize_graph(back), serialize_graph(kg));
}

TEST(KgFile, EmptyGraphRoundTrips) {
  KnowledgeGraph kg("ffviir", load_ontology(testing::data_dir() / "ontology/ffviir.ont"));
  auto back = parse_graph(serialize_graph(kg));
  EXPECT_TRUE(graph_equal(kg, back));
  EXPECT_TRUE(back.empty());
}

TEST(KgFile, RandomGraphsRoundTrip) {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 200; ++i) {
    auto g = testing::random_graph(rng, 1 + rng() % 500);
    ASSERT_LE(g.size(), 500u);
    auto back = parse_graph(serialize_graph(g));
    ASSERT_TRUE(graph_equal(g, back));
    expect_same_provenance(g, back);
  }
}

TEST(KgFile, TripleLinesCarryProvenanceComment) {
  auto text = serialize_graph(fig_graph());
  EXPECT_NE(text.find("(Sabrina, has_pokemon, Mr. Mime)\t# {\"kind\":\"pattern-extracted\""), std::string::npos)
      << text;
}

TEST(KgFile, CorruptFileReportsLine) {
  auto text = serialize_graph(fig_graph());
  text += "(Sabrina, has_gender female)\n";
  const auto expected_line = std::count(text.begin(), text.end(), '\n');
  try {
    parse_graph(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CorruptFile);
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(expected_line)), std::string::npos) << e.what();
  }
  EXPECT_ERRC(parse_graph("not a kg file\n"), Errc::CorruptFile);
  auto bad_relation = serialize_graph(fig_graph()) + "(Sabrina, has_salary, high)\n";
  EXPECT_ERRC(parse_graph(bad_relation), Errc::CorruptFile);
}

TEST(KgFile, TamperedIndexIsCorrupt) {
  auto text = serialize_graph(fig_graph());
  auto pos = text.find("@entity Pokemon Mr. Mime");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 24, "@entity Character Mr. Mime");
  EXPECT_ERRC(parse_graph(text), Errc::CorruptFile);
}

TEST(KgFile, OntologyMismatch) {
  auto text = serialize_graph(fig_graph());
  auto same = load_ontology(testing::data_dir() / "ontology/pokemon.ont");
  EXPECT_NO_THROW(parse_graph(text, &same));
  auto other = load_ontology(testing::data_dir() / "ontology/ffviir.ont");
  EXPECT_ERRC(parse_graph(text, &other), Errc::OntologyMismatch);
}

}  // namespace
}  // namespace kgdf::kg
