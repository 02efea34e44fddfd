#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgdf/eval/campaign.hpp"
#include "kgdf/gateway/config.hpp"
#include "kgdf/gen/generate.hpp"
#include "kgdf/kg/graph.hpp"
#include "kgdf/prompt/bundle.hpp"
#include "kgdf/prompt/persona.hpp"
#include "kgdf/prompt/scenario.hpp"

namespace kgdf::gateway {

// A game's loaded resources. Templates and personas are optional per kind.
struct GameResources {
  kg::KnowledgeGraph kg;
  std::optional<prompt::Template> battle_template;
  std::optional<prompt::Template> npc_template;
  std::optional<prompt::PersonaSet> personas;
  std::optional<std::size_t> candidates;
};

GameResources load_game(const GameConfig& game);

// subgraph + assemble for one scenario. InvalidConfig when the game lacks the
// template or personas the scenario needs.
prompt::PromptBundle build_bundle(const prompt::Scenario& scenario, const GameResources& game);

inline constexpr const char* kStages[] = {"subgraph", "assemble", "generate", "annotate", "select"};

struct StageFailure {
  std::string scenario;
  std::string stage;
  std::string code;
  std::string message;
};

struct RunReport {
  std::size_t scenarios = 0;
  std::map<std::string, std::size_t> stage_ok;  // every stage present
  std::size_t responses = 0;
  std::size_t annotations = 0;
  std::size_t selections = 0;
  std::vector<StageFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
};

nlohmann::ordered_json to_json(const RunReport& r);

struct PipelineOptions {
  std::size_t candidates = gen::kDefaultCandidates;
  std::size_t workers = 4;
  gen::Strategy strategy = gen::Strategy::Grounding;
};

// Runs subgraph -> assemble -> generate -> annotate -> select for every
// scenario, `workers` scenarios at a time, and writes bundles.jsonl,
// responses.jsonl, annotations.jsonl, selections.jsonl and report.json to
// `out_dir` in scenario order. A failing scenario is recorded and skipped.
// Only the `timestamp` field of responses depends on the clock.
RunReport run_pipeline(const std::vector<prompt::Scenario>& scenarios, const std::map<std::string, GameResources>& games,
                       gen::Backend& backend, const std::filesystem::path& out_dir, const PipelineOptions& options,
                       const gen::Clock& clock = gen::utc_now);

// Loads every configured game and the scenario file, then runs into
// <data_dir>/runs/<run id>.
RunReport run_pipeline(const ServiceConfig& config, const std::filesystem::path& scenario_file,
                       const std::string& run_id, gen::Backend& backend, const gen::Clock& clock = gen::utc_now);

// Campaign entries for the selected responses of a finished run.
std::vector<eval::CampaignEntry> campaign_entries(const std::filesystem::path& run_dir,
                                                  const std::vector<prompt::Scenario>& scenarios);

// Finds a response and its annotation across every run under `runs`.
// Returns {response_id, text, annotation} or null.
nlohmann::ordered_json find_annotation(const std::filesystem::path& runs, const std::string& response_id);

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

}  // namespace kgdf::gateway
