#include <gtest/gtest.h>

#include <regex>

#include "kgdf/eval/campaign.hpp"
#include "kgdf/gateway/pipeline.hpp"
#include "kgdf/text.hpp"
#include "test_util.hpp"

namespace kgdf::gateway {
namespace {

using testing::TempDir;

struct Setup {
  ServiceConfig config = load_config(testing::data_dir() / "kgdf.json");
  std::map<std::string, GameResources> games;
  Setup() {
    for (const auto& [name, g] : config.games) games.emplace(name, load_game(g));
  }
  PipelineOptions options() const { return {config.candidates, config.workers, config.strategy}; }
};

const Setup& setup() {
  static const Setup s;
  return s;
}

std::vector<prompt::Scenario> battles() { return prompt::load_scenarios(testing::data_dir() / "scenarios" / "ffviir_battles.json"); }
std::vector<prompt::Scenario> personas() {
  return prompt::load_scenarios(testing::data_dir() / "scenarios" / "pokemon_personas.json");
}

gen::ScriptedBackend scripted() {
  return gen::ScriptedBackend::from_file(testing::data_dir() / "fixtures" / "scripted.fixtures.json", "offline");
}

std::size_t line_count(const std::filesystem::path& p) { return split_lines(read_file(p)).size(); }

std::string without_timestamps(std::string text) {
  static const std::regex ts(R"("timestamp":"[^"]*")");
  return std::regex_replace(text, ts, R"("timestamp":"")");
}

gen::Clock fixed_clock() {
  return [] { return std::string("2024-01-01T00:00:00Z"); };
}

TEST(Pipeline, BattleMatrixSixtyFiveResponsesThirteenSelections) {
  TempDir tmp;
  auto backend = scripted();
  const auto report = run_pipeline(battles(), setup().games, backend, tmp.path(), setup().options());
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.scenarios, 13u);
  EXPECT_EQ(report.responses, 65u);
  EXPECT_EQ(report.annotations, 65u);
  EXPECT_EQ(report.selections, 13u);
  for (const auto* stage : kStages) EXPECT_EQ(report.stage_ok.at(stage), 13u) << stage;
  EXPECT_EQ(line_count(tmp / "bundles.jsonl"), 13u);
  EXPECT_EQ(line_count(tmp / "responses.jsonl"), 65u);
  EXPECT_EQ(line_count(tmp / "annotations.jsonl"), 65u);
  EXPECT_EQ(line_count(tmp / "selections.jsonl"), 13u);
  const auto persisted = nlohmann::json::parse(read_file(tmp / "report.json"));
  EXPECT_EQ(persisted["responses"], 65);
  EXPECT_EQ(persisted["failures"].size(), 0u);
  EXPECT_EQ(backend.request_count(), 65u);

  std::set<std::string> ids;
  for (const auto& j : read_jsonl(tmp / "responses.jsonl")) {
    EXPECT_TRUE(j["error"].is_null());
    EXPECT_EQ(j["batch_size"], 5);
    ids.insert(j["id"].get<std::string>());
  }
  EXPECT_EQ(ids.size(), 65u);
  for (const auto& j : read_jsonl(tmp / "selections.jsonl")) EXPECT_TRUE(ids.count(j["response_id"].get<std::string>()));
}

TEST(Pipeline, PersonaMatrixFeedsSeventyTaskCampaign) {
  TempDir tmp;
  auto backend = scripted();
  const auto scenarios = personas();
  const auto report = run_pipeline(scenarios, setup().games, backend, tmp.path(), setup().options());
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.responses, 70u);
  const auto entries = campaign_entries(tmp.path(), scenarios);
  const auto campaign = eval::create_campaign("personas", entries, {"Red", 70});
  EXPECT_EQ(campaign.tasks.size(), 70u);
  const auto* brock = campaign.find("t.red.mature.brock.c0");
  ASSERT_NE(brock, nullptr);
  EXPECT_EQ(brock->counterpart, "Brock");
  EXPECT_EQ(brock->persona, "mature");
  EXPECT_EQ(brock->scenario.rfind("I'm BROCK! I'm PEWTER's GYM LEADER!", 0), 0u);
}

TEST(Pipeline, EmptyScenarioSet) {
  TempDir tmp;
  auto backend = scripted();
  const auto report = run_pipeline({}, setup().games, backend, tmp.path(), setup().options());
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.scenarios, 0u);
  EXPECT_EQ(report.responses, 0u);
  EXPECT_EQ(report.selections, 0u);
  for (const auto* stage : kStages) EXPECT_EQ(report.stage_ok.at(stage), 0u);
  EXPECT_EQ(read_file(tmp / "responses.jsonl"), "");
  EXPECT_EQ(backend.request_count(), 0u);
}

TEST(Pipeline, MissingFixtureFailsOneScenarioOnly) {
  TempDir tmp;
  const auto scenarios = battles();
  auto table = scripted().fixtures();
  const auto bundle = build_bundle(scenarios[6], setup().games.at("ffviir"));
  ASSERT_EQ(table.erase(gen::prompt_hash(prompt::render(bundle))), 1u);
  gen::ScriptedBackend backend(table, "gap");
  const auto report = run_pipeline(scenarios, setup().games, backend, tmp.path(), setup().options());
  EXPECT_FALSE(report.ok());
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].scenario, scenarios[6].id);
  EXPECT_EQ(report.failures[0].stage, "generate");
  EXPECT_EQ(report.failures[0].code, "FixtureMissing");
  EXPECT_EQ(report.stage_ok.at("subgraph"), 13u);
  EXPECT_EQ(report.stage_ok.at("assemble"), 13u);
  EXPECT_EQ(report.stage_ok.at("generate"), 12u);
  EXPECT_EQ(report.selections, 12u);
  EXPECT_EQ(report.responses, 60u);
  EXPECT_EQ(line_count(tmp / "selections.jsonl"), 12u);
}

TEST(Pipeline, UnknownGameIsAStageFailure) {
  TempDir tmp;
  auto scenarios = battles();
  scenarios.resize(2);
  scenarios[1].game = "no-such-game";
  auto backend = scripted();
  const auto report = run_pipeline(scenarios, setup().games, backend, tmp.path(), setup().options());
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].stage, "subgraph");
  EXPECT_EQ(report.selections, 1u);
}

TEST(Pipeline, DeterministicAcrossRunsAndWorkerCounts) {
  TempDir a, b, c;
  auto options = setup().options();
  auto backend = scripted();
  run_pipeline(battles(), setup().games, backend, a.path(), options);
  options.workers = 1;
  run_pipeline(battles(), setup().games, backend, b.path(), options);
  options.workers = 7;
  run_pipeline(battles(), setup().games, backend, c.path(), options, fixed_clock());
  for (const auto* file : {"bundles.jsonl", "responses.jsonl", "annotations.jsonl", "selections.jsonl", "report.json"}) {
    EXPECT_EQ(without_timestamps(read_file(a / file)), without_timestamps(read_file(b / file))) << file;
    EXPECT_EQ(without_timestamps(read_file(a / file)), without_timestamps(read_file(c / file))) << file;
  }
  TempDir d;
  run_pipeline(battles(), setup().games, backend, d.path(), options, fixed_clock());
  for (const auto* file : {"bundles.jsonl", "responses.jsonl", "annotations.jsonl", "selections.jsonl", "report.json"})
    EXPECT_EQ(read_file(c / file), read_file(d / file)) << file;
}

TEST(Pipeline, FindAnnotationAcrossRuns) {
  TempDir tmp;
  auto backend = scripted();
  run_pipeline(battles(), setup().games, backend, tmp / "runs" / "one", setup().options());
  const auto found = find_annotation(tmp / "runs", "cloud.scorpion-sentinel.1.c0");
  ASSERT_FALSE(found.is_null());
  EXPECT_EQ(found["run"], "one");
  EXPECT_EQ(found["text"], "Barret, fall back and Cure up. I've got this.");
  EXPECT_EQ(found["annotation"]["response_id"], "cloud.scorpion-sentinel.1.c0");
  EXPECT_TRUE(find_annotation(tmp / "runs", "nope").is_null());
  EXPECT_TRUE(find_annotation(tmp / "missing", "nope").is_null());
}

TEST(Config, ParseAndValidate) {
  const auto& c = setup().config;
  EXPECT_EQ(c.port, 8080);
  EXPECT_EQ(c.campaign, "pokemon-personas");
  EXPECT_EQ(c.candidates, 5u);
  EXPECT_EQ(c.games.at("pokemon").candidates, std::optional<std::size_t>(1));
  EXPECT_FALSE(c.games.at("ffviir").candidates);
  EXPECT_EQ(selected_backend(c, true).kind, gen::BackendKind::Scripted);
  EXPECT_EQ(c.backends.at("chat").http.api_key_env, "OPENAI_API_KEY");

  auto j = nlohmann::json::parse(read_file(testing::data_dir() / "kgdf.json"));
  const auto base = testing::data_dir();
  auto bad = j;
  bad["listen"]["port"] = 70000;
  EXPECT_ERRC(parse_config(bad, base), Errc::InvalidConfig);
  bad = j;
  bad["listen"]["port"] = 0;
  EXPECT_ERRC(parse_config(bad, base), Errc::InvalidConfig);
  bad = j;
  bad["backend"] = "missing";
  EXPECT_ERRC(parse_config(bad, base), Errc::InvalidConfig);
  bad = j;
  bad.erase("data_dir");
  EXPECT_ERRC(parse_config(bad, base), Errc::InvalidConfig);
  bad = j;
  bad["games"]["pokemon"]["candidates"] = 0;
  EXPECT_ERRC(parse_config(bad, base), Errc::InvalidConfig);
  bad = j;
  bad["backends"]["chat"].erase("model");
  EXPECT_ERRC(parse_config(bad, base), Errc::InvalidConfig);
  bad = j;
  bad["backends"].erase("offline");
  bad["backend"] = "chat";
  EXPECT_ERRC(selected_backend(parse_config(bad, base), true), Errc::InvalidConfig);
  EXPECT_EQ(selected_backend(parse_config(bad, base), false).name, "chat");
}

TEST(Config, DataDirLayout) {
  ServiceConfig c;
  c.data_dir = "/srv/kgdf";
  c.campaign = "pilot";
  EXPECT_EQ(campaign_file(c), std::filesystem::path("/srv/kgdf/campaigns/pilot.jsonl"));
  EXPECT_EQ(runs_dir(c), std::filesystem::path("/srv/kgdf/runs"));
  TempDir tmp;
  ensure_writable_dir(tmp / "new" / "nested");
  EXPECT_TRUE(std::filesystem::is_directory(tmp / "new" / "nested"));
  EXPECT_TRUE(std::filesystem::is_empty(tmp / "new" / "nested"));
  write_file(tmp / "file", "x");
  EXPECT_ERRC(ensure_writable_dir(tmp / "file" / "sub"), Errc::DataDirUnwritable);
}

}  // namespace
}  // namespace kgdf::gateway
