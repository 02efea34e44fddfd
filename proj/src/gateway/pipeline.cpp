#include "kgdf/gateway/pipeline.hpp"

#include <algorithm>
#include <optional>

#include "kgdf/error.hpp"
#include "kgdf/grounding/annotate.hpp"
#include "kgdf/kg/kg_file.hpp"
#include "kgdf/kg/ontology.hpp"
#include "kgdf/parallel.hpp"
#include "kgdf/text.hpp"

namespace kgdf::gateway {

GameResources load_game(const GameConfig& game) {
  const auto ontology = kg::load_ontology(game.ontology);
  GameResources r{game.kg.extension() == ".kg"
                      ? kg::load(game.kg, &ontology)
                      : kg::graph_from_triple_list(game.game, ontology, read_file(game.kg), game.kg.filename().string()),
                  {}, {}, {}, game.candidates};
  if (!game.battle_template.empty()) r.battle_template = prompt::Template::load(game.battle_template);
  if (!game.npc_template.empty()) r.npc_template = prompt::Template::load(game.npc_template);
  if (!game.personas.empty()) r.personas = prompt::PersonaSet::load(game.personas);
  return r;
}

namespace {

struct SubgraphStage {
  std::vector<kg::Triple> speaker;
  std::vector<kg::Triple> counterpart;
};

SubgraphStage subgraphs(const prompt::Scenario& s, const GameResources& game) {
  SubgraphStage out;
  auto take = [&](const std::string& entity) {
    auto triples = kg::subgraph(game.kg, entity);
    if (triples.empty()) throw Error(Errc::EmptySubgraph, "no triples about '" + entity + "'");
    return triples;
  };
  if (s.kind() == prompt::ScenarioKind::Battle) {
    out.speaker = take(s.battle().speaker);
    out.counterpart = take(s.battle().boss);
  } else {
    out.counterpart = take(s.npc().npc);
  }
  return out;
}

prompt::PromptBundle assemble(const prompt::Scenario& s, const GameResources& game, const SubgraphStage& sub) {
  if (s.kind() == prompt::ScenarioKind::Battle) {
    if (!game.battle_template) throw Error(Errc::InvalidConfig, "game '" + s.game + "' has no battle template");
    return prompt::assemble_battle_prompt(sub.speaker, sub.counterpart, s, *game.battle_template);
  }
  if (!game.npc_template || !game.personas)
    throw Error(Errc::InvalidConfig, "game '" + s.game + "' has no npc template or personas");
  return prompt::assemble_npc_prompt(game.personas->find(s.npc().persona), sub.counterpart, s, *game.npc_template);
}

const GameResources& game_for(const prompt::Scenario& s, const std::map<std::string, GameResources>& games) {
  auto it = games.find(s.game);
  if (it == games.end()) throw Error(Errc::InvalidScenario, "scenario '" + s.id + "' names unknown game '" + s.game + "'");
  return it->second;
}

struct ScenarioResult {
  std::optional<prompt::PromptBundle> bundle;
  std::vector<gen::GeneratedResponse> responses;
  std::vector<grounding::GroundingAnnotation> annotations;
  std::optional<gen::Selection> selection;
  std::optional<StageFailure> failure;
  std::size_t stages_passed = 0;
};

std::string jsonl(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

}  // namespace

prompt::PromptBundle build_bundle(const prompt::Scenario& scenario, const GameResources& game) {
  return assemble(scenario, game, subgraphs(scenario, game));
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["scenarios"] = r.scenarios;
  j["responses"] = r.responses;
  j["annotations"] = r.annotations;
  j["selections"] = r.selections;
  j["stages"] = nlohmann::ordered_json::object();
  for (const char* stage : kStages) {
    std::size_t failed = 0;
    for (const auto& f : r.failures) failed += f.stage == stage;
    const auto it = r.stage_ok.find(stage);
    j["stages"][stage] = {{"ok", it == r.stage_ok.end() ? 0 : it->second}, {"failed", failed}};
  }
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : r.failures)
    j["failures"].push_back({{"scenario", f.scenario}, {"stage", f.stage}, {"code", f.code}, {"message", f.message}});
  return j;
}

RunReport run_pipeline(const std::vector<prompt::Scenario>& scenarios, const std::map<std::string, GameResources>& games,
                       gen::Backend& backend, const std::filesystem::path& out_dir, const PipelineOptions& options,
                       const gen::Clock& clock) {
  std::vector<ScenarioResult> results(scenarios.size());
  parallel_for(scenarios.size(), options.workers, [&](std::size_t i) {
    const auto& s = scenarios[i];
    auto& res = results[i];
    const char* stage = kStages[0];
    try {
      const auto& game = game_for(s, games);
      const auto sub = subgraphs(s, game);
      res.stages_passed = 1;
      stage = kStages[1];
      res.bundle = assemble(s, game, sub);
      res.stages_passed = 2;
      stage = kStages[2];
      res.responses = gen::generate(*res.bundle, game.candidates.value_or(options.candidates), backend, clock);
      res.stages_passed = 3;
      stage = kStages[3];
      res.annotations = gen::annotate_candidates(*res.bundle, res.responses);
      res.stages_passed = 4;
      stage = kStages[4];
      if (options.strategy == gen::Strategy::Manual)
        throw Error(Errc::InvalidArgument, "manual selection needs an operator; use `gen select`");
      res.selection = gen::select_best(res.responses, res.annotations, options.strategy);
      res.stages_passed = 5;
    } catch (const Error& e) {
      res.failure = StageFailure{s.id, stage, std::string(to_string(e.code())), e.detail()};
    }
  });

  RunReport report;
  report.scenarios = scenarios.size();
  for (const char* stage : kStages) report.stage_ok[stage] = 0;
  std::vector<std::string> bundles, responses, annotations, selections;
  for (const auto& res : results) {
    for (std::size_t k = 0; k < res.stages_passed; ++k) ++report.stage_ok[kStages[k]];
    if (res.failure) {
      report.failures.push_back(*res.failure);
      continue;
    }
    bundles.push_back(prompt::to_json(*res.bundle).dump());
    for (std::size_t k = 0; k < res.responses.size(); ++k) {
      responses.push_back(gen::to_json(res.responses[k]).dump());
      annotations.push_back(grounding::to_json(res.annotations[k], res.responses[k].text).dump());
    }
    selections.push_back(gen::to_json(*res.selection).dump());
  }
  report.responses = responses.size();
  report.annotations = annotations.size();
  report.selections = selections.size();

  ensure_writable_dir(out_dir);
  write_file(out_dir / "bundles.jsonl", jsonl(bundles));
  write_file(out_dir / "responses.jsonl", jsonl(responses));
  write_file(out_dir / "annotations.jsonl", jsonl(annotations));
  write_file(out_dir / "selections.jsonl", jsonl(selections));
  write_file(out_dir / "report.json", to_json(report).dump(2) + '\n');
  return report;
}

RunReport run_pipeline(const ServiceConfig& config, const std::filesystem::path& scenario_file,
                       const std::string& run_id, gen::Backend& backend, const gen::Clock& clock) {
  if (run_id.empty() || run_id.find_first_of("/\\") != std::string::npos || run_id == "." || run_id == "..")
    throw Error(Errc::InvalidArgument, "run id '" + run_id + "' is not a plain name");
  const auto scenarios = prompt::load_scenarios(scenario_file);
  std::map<std::string, GameResources> games;
  for (const auto& s : scenarios)
    if (!games.count(s.game) && config.games.count(s.game)) games.emplace(s.game, load_game(config.games.at(s.game)));
  return run_pipeline(scenarios, games, backend, runs_dir(config) / run_id,
                      {config.candidates, config.workers, config.strategy}, clock);
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::vector<nlohmann::json> out;
  std::size_t n = 0;
  for (const auto& line : split_lines(read_file(path))) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::CorruptFile, path.string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<eval::CampaignEntry> campaign_entries(const std::filesystem::path& run_dir,
                                                  const std::vector<prompt::Scenario>& scenarios) {
  std::map<std::string, prompt::PromptBundle> bundles;
  for (const auto& j : read_jsonl(run_dir / "bundles.jsonl")) {
    auto b = prompt::bundle_from_json(j);
    bundles.emplace(b.id, std::move(b));
  }
  std::map<std::string, gen::GeneratedResponse> responses;
  for (const auto& j : read_jsonl(run_dir / "responses.jsonl")) {
    auto r = gen::response_from_json(j);
    responses.emplace(r.id, std::move(r));
  }
  std::map<std::string, const prompt::Scenario*> by_id;
  for (const auto& s : scenarios) by_id[s.id] = &s;

  std::vector<eval::CampaignEntry> entries;
  for (const auto& j : read_jsonl(run_dir / "selections.jsonl")) {
    const auto sel = gen::selection_from_json(j);
    const auto s = by_id.find(sel.bundle_id);
    const auto b = bundles.find(sel.bundle_id);
    const auto r = responses.find(sel.response_id);
    if (s == by_id.end() || b == bundles.end() || r == responses.end())
      throw Error(Errc::MissingMetadata, "selection for '" + sel.bundle_id + "' has no matching scenario, bundle or response");
    entries.push_back(eval::entry_for(*s->second, b->second, r->second));
  }
  return entries;
}

nlohmann::ordered_json find_annotation(const std::filesystem::path& runs, const std::string& response_id) {
  if (!std::filesystem::is_directory(runs)) return nullptr;
  std::vector<std::filesystem::path> dirs;
  for (const auto& d : std::filesystem::directory_iterator(runs))
    if (d.is_directory() && std::filesystem::exists(d.path() / "annotations.jsonl")) dirs.push_back(d.path());
  std::sort(dirs.begin(), dirs.end());
  auto find_line = [&](const std::filesystem::path& file, const char* key) -> std::optional<nlohmann::ordered_json> {
    for (const auto& line : split_lines(read_file(file))) {
      if (line.find(response_id) == std::string::npos) continue;
      auto j = nlohmann::ordered_json::parse(line, nullptr, false);
      if (!j.is_discarded() && j.value(key, "") == response_id) return j;
    }
    return std::nullopt;
  };
  for (const auto& dir : dirs) {
    auto a = find_line(dir / "annotations.jsonl", "response_id");
    if (!a) continue;
    auto r = find_line(dir / "responses.jsonl", "id");
    if (!r) continue;
    nlohmann::ordered_json out;
    out["response_id"] = response_id;
    out["run"] = dir.filename().string();
    out["text"] = (*r)["text"];
    out["annotation"] = *a;
    return out;
  }
  return nullptr;
}

}  // namespace kgdf::gateway
