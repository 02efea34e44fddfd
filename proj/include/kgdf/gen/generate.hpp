#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgdf/gen/backend.hpp"
#include "kgdf/grounding/annotate.hpp"
#include "kgdf/prompt/bundle.hpp"

namespace kgdf::gen {

inline constexpr std::size_t kDefaultCandidates = 5;

struct GeneratedResponse {
  std::string id;  // "<bundle id>.c<candidate>"
  std::string bundle_id;
  std::string text;
  std::string prompt_hash;
  std::string template_version;
  std::size_t candidate = 0;
  std::size_t batch_size = 0;
  std::string backend;
  std::string timestamp;  // the only wall-clock field
  std::optional<std::string> error;  // set when the slot stayed empty after a retry

  friend bool operator==(const GeneratedResponse&, const GeneratedResponse&) = default;
};

// Returns an ISO-8601 UTC timestamp. Injected so tests can pin it.
using Clock = std::function<std::string()>;
std::string utc_now();

// Requests candidates 0..n-1 in order. An empty (or blank) completion is
// retried once; if it is still empty the slot becomes an error entry rather
// than being dropped. Backend errors (BackendUnavailable, FixtureMissing)
// propagate. InvalidArgument when n is 0.
std::vector<GeneratedResponse> generate(const prompt::PromptBundle& bundle, std::size_t n, Backend& backend,
                                        const Clock& clock = utc_now);

// Annotates every candidate against the bundle: knowledge from all of its
// triples, situation from its scenario section.
std::vector<grounding::GroundingAnnotation> annotate_candidates(const prompt::PromptBundle& bundle,
                                                                const std::vector<GeneratedResponse>& responses);

enum class Strategy { Grounding, Manual };
std::string_view to_string(Strategy s) noexcept;
Strategy strategy_from_string(std::string_view text);

struct CandidateScore {
  std::size_t candidate = 0;
  std::size_t knowledge_tokens = 0;
  std::size_t situation_tokens = 0;
  bool error = false;
  friend bool operator==(const CandidateScore&, const CandidateScore&) = default;
};

struct Selection {
  std::string bundle_id;
  std::size_t chosen = 0;
  std::string response_id;
  Strategy strategy = Strategy::Grounding;
  std::vector<CandidateScore> scores;
  friend bool operator==(const Selection&, const Selection&) = default;
};

// Grounding: the candidate with the most knowledge tokens, lowest index on
// ties, error entries never chosen. Manual: `manual_index`.
// Errors: EmptyCandidateList (no candidates, or only error entries under
// the grounding strategy); IndexOutOfRange (manual index missing or too
// large); InvalidArgument when the lists are not parallel.
Selection select_best(const std::vector<GeneratedResponse>& candidates,
                      const std::vector<grounding::GroundingAnnotation>& annotations, Strategy strategy,
                      std::optional<std::size_t> manual_index = std::nullopt);

nlohmann::ordered_json to_json(const GeneratedResponse& r);
GeneratedResponse response_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const Selection& s);
Selection selection_from_json(const nlohmann::json& j);

// Turns scenario-keyed canned responses into a scripted fixture table keyed
// by the hash of each bundle's rendered prompt. Bundles without responses
// are skipped.
ScriptedBackend::FixtureTable author_fixtures(const std::vector<prompt::PromptBundle>& bundles,
                                              const std::map<std::string, std::vector<std::string>>& by_scenario);

}  // namespace kgdf::gen
