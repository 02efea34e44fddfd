#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "kgdf/grounding/annotate.hpp"
#include "kgdf/kg/kg_file.hpp"
#include "kgdf/prompt/scenario.hpp"
#include "kgdf/text.hpp"
#include "grounding_oracle.hpp"
#include "test_util.hpp"

namespace kgdf::grounding {
namespace {

using kg::parse_triple;
using testing::corpus;
using testing::oracle_annotate;
using testing::oracle_tokenize;
using testing::pokemon;
using testing::ffviir;
using testing::random_response;
using testing::strip;

std::set<std::string> oracle_situation_lexemes(std::string_view scenario) {
  const auto toks = oracle_tokenize(scenario);
  std::set<std::string> out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (is_stopword(toks[i].norm)) continue;
    out.insert(toks[i].norm);
    if (i + 1 < toks.size() && !is_stopword(toks[i + 1].norm)) out.insert(toks[i].norm + " " + toks[i + 1].norm);
  }
  return out;
}

std::set<std::string> keys_of(const Lexicon& lex) {
  std::set<std::string> out;
  for (const auto& [k, _] : lex.entries()) out.insert(k);
  return out;
}

void expect_well_formed(std::string_view text, const GroundingAnnotation& a, const Lexicon& k, const Lexicon& s) {
  std::size_t pos = 0, ktok = 0, stok = 0;
  std::string rebuilt;
  for (const auto& span : a.spans) {
    ASSERT_LE(pos, span.start);
    ASSERT_LT(span.start, span.end);
    ASSERT_LE(span.end, text.size());
    rebuilt += std::string(text.substr(pos, span.start - pos)) + std::string(text.substr(span.start, span.end - span.start));
    pos = span.end;
    const auto& lex = span.label == Label::Knowledge ? k : s;
    const auto* sources = lex.sources(span.lexeme);
    ASSERT_NE(sources, nullptr) << span.lexeme;
    EXPECT_EQ(sources->front(), span.source);
    std::size_t covered = 0;
    for (const auto& t : oracle_tokenize(text))
      covered += t.start >= span.start && t.end <= span.end;
    EXPECT_EQ(covered, span.tokens);
    (span.label == Label::Knowledge ? ktok : stok) += covered;
  }
  rebuilt += std::string(text.substr(pos));
  EXPECT_EQ(rebuilt, text);
  EXPECT_EQ(a.knowledge_tokens, ktok);
  EXPECT_EQ(a.situation_tokens, stok);
}

std::vector<kg::Triple> scorpion_triples() { return kg::subgraph(ffviir(), "Scorpion Sentinel"); }

const std::string kElectrostompLow = "[When Scorpion Sentinel is using Electrostomp and Barret health is very low]";

// ---------------------------------------------------------------------------

TEST(Tokenize, WordsHyphensApostrophes) {
  std::vector<std::string> norms;
  for (const auto& t : tokenize("It's healing up! Focus attacks on the core—now! Auto-Repair… I’ll -x- Pokémon"))
    norms.push_back(t.norm);
  EXPECT_EQ(norms, (std::vector<std::string>{"its", "healing", "up", "focus", "attacks", "on", "the", "core", "now",
                                             "auto-repair", "ill", "x", "pokémon"}));
  auto toks = tokenize("  Barret, pull");
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].start, 2u);
  EXPECT_EQ(toks[0].end, 8u);
}

TEST(KnowledgeLexicon, Examples) {
  auto lex = build_knowledge_lexicon({parse_triple("(Scorpion Sentinel, has_ability, Auto-Repair)")});
  EXPECT_TRUE(lex.contains("auto-repair"));
  EXPECT_FALSE(lex.contains("scorpion"));
  EXPECT_FALSE(lex.contains("has_ability"));
  EXPECT_EQ(lex.sources("auto-repair")->front(), "(Scorpion Sentinel, has_ability, Auto-Repair)");

  auto brock = build_knowledge_lexicon(
      {parse_triple("(Brock, has_pokemon, Geodude)"), parse_triple("(Brock, has_pokemon, Onix)")});
  EXPECT_TRUE(brock.contains("geodude"));
  EXPECT_TRUE(brock.contains("onix"));
  EXPECT_FALSE(brock.contains("brock"));

  EXPECT_TRUE(build_knowledge_lexicon({}).empty());
}

TEST(KnowledgeLexicon, PhrasesAndContentWords) {
  auto lex = build_knowledge_lexicon({parse_triple("(Scorpion Sentinel, weak_to, attacks on the core)"),
                                      parse_triple("(X, r, the and of)")});
  EXPECT_EQ(keys_of(lex), (std::set<std::string>{"attacks on the core", "attacks", "core"}));
  EXPECT_EQ(lex.max_tokens(), 4u);
}

TEST(SituationLexicon, Examples) {
  auto lex = build_situation_lexicon(kElectrostompLow);
  EXPECT_TRUE(lex.contains("barret"));
  EXPECT_TRUE(lex.contains("electrostomp"));
  EXPECT_TRUE(lex.contains("health"));
  EXPECT_TRUE(lex.contains("scorpion sentinel"));
  EXPECT_TRUE(lex.contains("barret health"));
  EXPECT_FALSE(lex.contains("very"));
  EXPECT_TRUE(build_situation_lexicon("is the and").empty());
}

TEST(SituationLexicon, MatchesTokenizerOracle) {
  std::vector<std::string> texts;
  for (const auto& item : corpus()) texts.push_back(item.scenario);
  std::mt19937_64 rng(7);
  const std::vector<std::string> pieces = {"When", "the", "Boss", "uses", "EM Shot", "and", "Barret's", "HP",
                                           "is", "low", "—", ",", "80%", "Auto-Repair", "Pokémon", "...", "’s"};
  for (int i = 0; i < 200; ++i) {
    std::string t;
    for (int k = std::uniform_int_distribution<int>(0, 12)(rng); k > 0; --k)
      t += pieces[rng() % pieces.size()] + (rng() % 3 ? " " : "");
    texts.push_back(t);
  }
  for (const auto& t : texts) EXPECT_EQ(keys_of(build_situation_lexicon(t)), oracle_situation_lexemes(t)) << t;
}

TEST(Annotate, AutoRepairIsKnowledge) {
  const std::string text = "Looks like your auto-repair took the day off.";
  auto a = annotate(text, build_knowledge_lexicon(scorpion_triples()),
                    build_situation_lexicon("[Upon defeating the Scorpion Sentinel]"));
  ASSERT_EQ(a.spans.size(), 1u);
  EXPECT_EQ(text.substr(a.spans[0].start, a.spans[0].end - a.spans[0].start), "auto-repair");
  EXPECT_EQ(a.spans[0].label, Label::Knowledge);
  EXPECT_EQ(a.spans[0].source, "(Scorpion Sentinel, uses_skill, Auto-Repair)");
  EXPECT_EQ(a.knowledge_tokens, 1u);
}

TEST(Annotate, BarretPullBackIsSituation) {
  const std::string text = "Barret, pull back! I'll handle the front, you cover me!";
  const auto region_end = text.find('!');
  auto a = annotate(text, build_knowledge_lexicon(scorpion_triples()), build_situation_lexicon(kElectrostompLow));
  ASSERT_FALSE(a.spans.empty());
  bool situation_in_region = false;
  for (const auto& s : a.spans) {
    if (s.start < region_end) {
      EXPECT_EQ(s.label, Label::Situation);
      situation_in_region = true;
    }
  }
  EXPECT_TRUE(situation_in_region);
  EXPECT_EQ(text.substr(a.spans[0].start, a.spans[0].end - a.spans[0].start), "Barret");
}

TEST(Annotate, GeodudeAndOnixAreKnowledge) {
  auto brock = kg::subgraph(pokemon(), "Brock");
  auto k = build_knowledge_lexicon(brock);
  for (const auto& item : corpus()) {
    if (item.id.find(".brock") == std::string::npos) continue;
    auto a = annotate(item.text, k, build_situation_lexicon(item.scenario));
    std::set<std::string> knowledge;
    for (const auto& s : a.spans)
      if (s.label == Label::Knowledge) knowledge.insert(item.text.substr(s.start, s.end - s.start));
    EXPECT_TRUE(knowledge.count("Geodude")) << item.text;
    EXPECT_TRUE(knowledge.count("Onix")) << item.text;
  }
}

TEST(Annotate, NoSharedTokensNoSpans) {
  auto a = annotate("Nothing here matches.", build_knowledge_lexicon(scorpion_triples()),
                    build_situation_lexicon(kElectrostompLow));
  EXPECT_TRUE(a.spans.empty());
  EXPECT_EQ(a.knowledge_tokens + a.situation_tokens, 0u);
  EXPECT_TRUE(annotate("", Lexicon{}, Lexicon{}).spans.empty());
}

TEST(Annotate, KnowledgeWinsOverlap) {
  auto k = build_knowledge_lexicon({parse_triple("(S, uses_skill, Electrostomp)")});
  auto s = build_situation_lexicon(kElectrostompLow);
  auto a = annotate("Electrostomp again", k, s);
  ASSERT_EQ(a.spans.size(), 1u);
  EXPECT_EQ(a.spans[0].label, Label::Knowledge);
}

TEST(Annotate, FixtureCorpusMatchesOracle) {
  std::size_t n = 0;
  for (const auto& item : corpus()) {
    auto k = build_knowledge_lexicon(item.triples);
    auto s = build_situation_lexicon(item.scenario);
    auto a = annotate(item.text, k, s);
    EXPECT_EQ(strip(a), oracle_annotate(item.text, k, s)) << item.id << ": " << item.text;
    expect_well_formed(item.text, a, k, s);
    ++n;
  }
  EXPECT_EQ(n, 13u * 5 + 70u);
}

TEST(AnnotateProperty, RandomResponsesMatchOracle) {
  std::mt19937_64 rng(99);
  auto items = corpus();
  for (int i = 0; i < 500; ++i) {
    const auto& item = items[rng() % items.size()];
    auto k = build_knowledge_lexicon(item.triples);
    auto s = build_situation_lexicon(item.scenario);
    auto text = random_response(rng, testing::response_vocab(item));
    auto a = annotate(text, k, s);
    ASSERT_EQ(strip(a), oracle_annotate(text, k, s)) << "case " << i << ": " << text;
    expect_well_formed(text, a, k, s);
    EXPECT_EQ(a, annotate(text, k, s));
  }
}

std::set<std::size_t> knowledge_content_tokens(std::string_view text, const GroundingAnnotation& a) {
  std::set<std::size_t> out;
  for (const auto& t : tokenize(text)) {
    if (is_stopword(t.norm)) continue;
    for (const auto& s : a.spans)
      if (s.label == Label::Knowledge && t.start >= s.start && t.end <= s.end) out.insert(t.start);
  }
  return out;
}

TEST(AnnotateProperty, AddingATripleNeverShrinksKnowledge) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"red", "dress", "black", "belt", "the", "of", "core", "rock", "hard",
                                          "defense", "and", "a", "small", "mime", "mr"};
  auto phrase = [&] {
    std::string p;
    for (int k = std::uniform_int_distribution<int>(1, 4)(rng); k > 0; --k) p += (p.empty() ? "" : " ") + words[rng() % words.size()];
    return p;
  };
  for (int i = 0; i < 300; ++i) {
    std::vector<kg::Triple> triples;
    for (int k = std::uniform_int_distribution<int>(0, 4)(rng); k > 0; --k)
      triples.emplace_back("E", "r", phrase());
    auto s = build_situation_lexicon(phrase() + " " + phrase());
    auto text = random_response(rng, words);
    auto before = annotate(text, build_knowledge_lexicon(triples), s);
    triples.emplace_back("E", "r2", phrase());
    auto after = annotate(text, build_knowledge_lexicon(triples), s);
    auto b = knowledge_content_tokens(text, before), c = knowledge_content_tokens(text, after);
    EXPECT_TRUE(std::includes(c.begin(), c.end(), b.begin(), b.end())) << text;
  }
}

TEST(AnnotateProperty, RemovingTheSourceTripleRemovesTheSpan) {
  std::size_t checked = 0;
  for (const auto& item : corpus()) {
    auto k = build_knowledge_lexicon(item.triples);
    auto s = build_situation_lexicon(item.scenario);
    auto a = annotate(item.text, k, s);
    for (const auto& span : a.spans) {
      if (span.label != Label::Knowledge || k.sources(span.lexeme)->size() != 1) continue;
      std::vector<kg::Triple> rest;
      for (const auto& t : item.triples)
        if (triple_id(t) != span.source) rest.push_back(t);
      auto again = annotate(item.text, build_knowledge_lexicon(rest), s);
      for (const auto& other : again.spans)
        EXPECT_FALSE(other.label == Label::Knowledge && other.source == span.source);
      EXPECT_FALSE(std::any_of(again.spans.begin(), again.spans.end(), [&](const Span& o) {
        return o.label == Label::Knowledge && o.start == span.start && o.end == span.end && o.lexeme == span.lexeme;
      }));
      ++checked;
    }
  }
  EXPECT_GT(checked, 50u);
}

TEST(AnnotationJson, RoundTripAndUtf16Offsets) {
  const std::string text = "Wow, Brock! I’ve heard about your Geodude and Onix.";
  auto a = annotate(text, build_knowledge_lexicon(kg::subgraph(pokemon(), "Brock")),
                    build_situation_lexicon("Brock: I'm BROCK!"), "r1");
  auto j = to_json(a, text);
  EXPECT_EQ(annotation_from_json(nlohmann::json::parse(j.dump())), a);
  // "’" is 3 bytes but one UTF-16 unit, so offsets after it shift by 2
  for (const auto& s : j["spans"]) {
    const auto start = s["start"].get<std::size_t>();
    EXPECT_EQ(s["start_u16"].get<std::size_t>(), start > text.find("’") ? start - 2 : start);
  }
}

TEST(RenderAnsi, WrapsSpansOnly) {
  const std::string text = "Looks like your auto-repair took the day off.";
  auto a = annotate(text, build_knowledge_lexicon(scorpion_triples()), Lexicon{});
  EXPECT_EQ(render_ansi(text, a), "Looks like your \x1b[30;46mauto-repair\x1b[0m took the day off.");
}

}  // namespace
}  // namespace kgdf::grounding
