#include "kgdf/gen/generate.hpp"

#include <chrono>
#include <ctime>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::gen {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<GeneratedResponse> generate(const prompt::PromptBundle& bundle, std::size_t n, Backend& backend,
                                        const Clock& clock) {
  if (n == 0) throw Error(Errc::InvalidArgument, "candidate count must be at least 1");
  const auto prompt = prompt::render(bundle);
  const auto hash = prompt_hash(prompt);
  std::vector<GeneratedResponse> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    GeneratedResponse r;
    r.id = bundle.id + ".c" + std::to_string(k);
    r.bundle_id = bundle.id;
    r.prompt_hash = hash;
    r.template_version = bundle.template_version;
    r.candidate = k;
    r.batch_size = n;
    r.backend = backend.descriptor();
    r.text = backend.complete(prompt, k);
    if (trim(r.text).empty()) r.text = backend.complete(prompt, k);
    if (trim(r.text).empty()) {
      r.text.clear();
      r.error = std::string(to_string(Errc::EmptyCompletion)) + ": candidate " + std::to_string(k) +
                " was empty after one retry";
    }
    r.timestamp = clock();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<grounding::GroundingAnnotation> annotate_candidates(const prompt::PromptBundle& bundle,
                                                                const std::vector<GeneratedResponse>& responses) {
  auto triples = bundle.speaker_triples;
  triples.insert(triples.end(), bundle.counterpart_triples.begin(), bundle.counterpart_triples.end());
  const auto knowledge = grounding::build_knowledge_lexicon(triples);
  const auto situation = grounding::build_situation_lexicon(bundle.scenario);
  std::vector<grounding::GroundingAnnotation> out;
  out.reserve(responses.size());
  for (const auto& r : responses) out.push_back(grounding::annotate(r.text, knowledge, situation, r.id));
  return out;
}

std::string_view to_string(Strategy s) noexcept { return s == Strategy::Grounding ? "grounding" : "manual"; }

Strategy strategy_from_string(std::string_view text) {
  if (text == "grounding") return Strategy::Grounding;
  if (text == "manual") return Strategy::Manual;
  throw Error(Errc::InvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

Selection select_best(const std::vector<GeneratedResponse>& candidates,
                      const std::vector<grounding::GroundingAnnotation>& annotations, Strategy strategy,
                      std::optional<std::size_t> manual_index) {
  if (candidates.empty()) throw Error(Errc::EmptyCandidateList, "no candidates to select from");
  if (annotations.size() != candidates.size())
    throw Error(Errc::InvalidArgument, "candidates and annotations differ in length");
  Selection s;
  s.bundle_id = candidates.front().bundle_id;
  s.strategy = strategy;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    s.scores.push_back({i, annotations[i].knowledge_tokens, annotations[i].situation_tokens,
                        candidates[i].error.has_value()});
  if (strategy == Strategy::Manual) {
    if (!manual_index || *manual_index >= candidates.size())
      throw Error(Errc::IndexOutOfRange, "manual index " + (manual_index ? std::to_string(*manual_index) : "missing") +
                                             " for " + std::to_string(candidates.size()) + " candidates");
    s.chosen = *manual_index;
  } else {
    std::optional<std::size_t> best;
    for (const auto& score : s.scores) {
      if (score.error) continue;
      if (!best || score.knowledge_tokens > s.scores[*best].knowledge_tokens) best = score.candidate;
    }
    if (!best) throw Error(Errc::EmptyCandidateList, "every candidate is an error entry");
    s.chosen = *best;
  }
  s.response_id = candidates[s.chosen].id;
  return s;
}

nlohmann::ordered_json to_json(const GeneratedResponse& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["bundle_id"] = r.bundle_id;
  j["candidate"] = r.candidate;
  j["batch_size"] = r.batch_size;
  j["text"] = r.text;
  j["prompt_hash"] = r.prompt_hash;
  j["template_version"] = r.template_version;
  j["backend"] = r.backend;
  j["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
  j["timestamp"] = r.timestamp;
  return j;
}

GeneratedResponse response_from_json(const nlohmann::json& j) {
  GeneratedResponse r;
  try {
    r.id = j.at("id").get<std::string>();
    r.bundle_id = j.at("bundle_id").get<std::string>();
    r.candidate = j.at("candidate").get<std::size_t>();
    r.batch_size = j.at("batch_size").get<std::size_t>();
    r.text = j.at("text").get<std::string>();
    r.prompt_hash = j.at("prompt_hash").get<std::string>();
    r.template_version = j.at("template_version").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
    r.timestamp = j.value("timestamp", "");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("response: ") + e.what());
  }
  return r;
}

nlohmann::ordered_json to_json(const Selection& s) {
  nlohmann::ordered_json j;
  j["bundle_id"] = s.bundle_id;
  j["strategy"] = to_string(s.strategy);
  j["chosen"] = s.chosen;
  j["response_id"] = s.response_id;
  j["scores"] = nlohmann::ordered_json::array();
  for (const auto& c : s.scores)
    j["scores"].push_back({{"candidate", c.candidate},
                           {"knowledge_tokens", c.knowledge_tokens},
                           {"situation_tokens", c.situation_tokens},
                           {"error", c.error}});
  return j;
}

Selection selection_from_json(const nlohmann::json& j) {
  Selection s;
  try {
    s.bundle_id = j.at("bundle_id").get<std::string>();
    s.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    s.chosen = j.at("chosen").get<std::size_t>();
    s.response_id = j.at("response_id").get<std::string>();
    for (const auto& c : j.at("scores"))
      s.scores.push_back({c.at("candidate").get<std::size_t>(), c.at("knowledge_tokens").get<std::size_t>(),
                          c.at("situation_tokens").get<std::size_t>(), c.at("error").get<bool>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("selection: ") + e.what());
  }
  return s;
}

ScriptedBackend::FixtureTable author_fixtures(const std::vector<prompt::PromptBundle>& bundles,
                                              const std::map<std::string, std::vector<std::string>>& by_scenario) {
  ScriptedBackend::FixtureTable table;
  for (const auto& b : bundles) {
    auto it = by_scenario.find(b.id);
    if (it == by_scenario.end()) continue;
    table[prompt_hash(prompt::render(b))] = it->second;
  }
  return table;
}

}  // namespace kgdf::gen
