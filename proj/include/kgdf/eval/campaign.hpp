#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgdf/gen/generate.hpp"
#include "kgdf/prompt/bundle.hpp"
#include "kgdf/prompt/scenario.hpp"

namespace kgdf::eval {

// Everything an evaluator sees for one response.
struct CampaignEntry {
  std::string response_id;
  std::string persona;       // persona key, used for per-persona stats
  std::string persona_text;  // shown to the evaluator
  std::string counterpart;
  std::string scenario;      // NPC utterance or battle situation
  std::string response;
};

struct Statement {
  std::string key;  // "s1" / "s2"
  std::string text;
  friend bool operator==(const Statement&, const Statement&) = default;
};

struct EvalTask {
  std::string id;  // "t.<response id>"
  std::string response_id;
  std::string speaker;
  std::string persona;
  std::string persona_text;
  std::string counterpart;
  std::string scenario;
  std::string response;
  std::string instruction;
  std::array<Statement, 2> statements;
  friend bool operator==(const EvalTask&, const EvalTask&) = default;
};

struct Rating {
  std::string task_id;
  std::string evaluator;
  double s1 = 0;
  double s2 = 0;
  std::string timestamp;
  friend bool operator==(const Rating&, const Rating&) = default;
};

struct Campaign {
  std::string id;
  std::vector<EvalTask> tasks;  // sorted by id
  std::vector<Rating> ratings;  // submission order

  const EvalTask* find(std::string_view task_id) const;
};

struct CampaignOptions {
  std::string speaker = "Red";
  std::optional<std::size_t> expected_size;  // SizeMismatch when set and different
};

std::string task_id_for(std::string_view response_id);
std::string instruction_text(std::string_view speaker);
std::array<Statement, 2> statement_texts(std::string_view speaker);

// One task per entry. Errors: MissingMetadata (names the response),
// DuplicateTask, SizeMismatch, InvalidArgument for a malformed campaign id.
Campaign create_campaign(std::string id, const std::vector<CampaignEntry>& entries,
                         const CampaignOptions& options = {});

// Metadata for a persona-matrix response, taken from its scenario and bundle.
CampaignEntry entry_for(const prompt::Scenario& scenario, const prompt::PromptBundle& bundle,
                        const gen::GeneratedResponse& response);

// ScoreOutOfRange outside [1, 5] (or non-finite); ScoreNotHalfStep otherwise
// unless the score is a multiple of 0.5.
void validate_score(double score);

// Validates and appends. Errors: UnknownTask, DuplicateRating, ScoreOutOfRange,
// ScoreNotHalfStep, InvalidArgument for an empty evaluator id.
const Rating& submit_rating(Campaign& campaign, Rating rating);

// Lowest task id the evaluator has not rated.
const EvalTask* next_task(const Campaign& campaign, std::string_view evaluator);

struct Progress {
  std::size_t rated = 0;
  std::size_t total = 0;
};
Progress progress(const Campaign& campaign, std::string_view evaluator);

nlohmann::ordered_json to_json(const EvalTask& t);
EvalTask task_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const Rating& r);
Rating rating_from_json(const nlohmann::json& j);

}  // namespace kgdf::eval
