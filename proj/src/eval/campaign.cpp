#include "kgdf/eval/campaign.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::eval {

const EvalTask* Campaign::find(std::string_view task_id) const {
  auto it = std::lower_bound(tasks.begin(), tasks.end(), task_id,
                             [](const EvalTask& t, std::string_view id) { return t.id < id; });
  return it != tasks.end() && it->id == task_id ? &*it : nullptr;
}

std::string task_id_for(std::string_view response_id) { return "t." + std::string(response_id); }

std::string instruction_text(std::string_view speaker) {
  const std::string s(speaker);
  return "Read " + s + "'s personality and situation with the other character and use the sliders below to " +
         "indicate how much you agree with " + s + "'s response (1 = Strongly disagree, 5 = Strongly agree).";
}

std::array<Statement, 2> statement_texts(std::string_view speaker) {
  const std::string s(speaker);
  return {Statement{"s1", s + "'s response adequately expresses " + s + "'s personality"},
          Statement{"s2", s + "'s response is reasonable and fits in conversation"}};
}

namespace {

bool valid_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

}  // namespace

Campaign create_campaign(std::string id, const std::vector<CampaignEntry>& entries, const CampaignOptions& options) {
  if (!valid_id(id)) throw Error(Errc::InvalidArgument, "campaign id '" + id + "' must match [A-Za-z0-9_.-]+");
  if (trim(options.speaker).empty()) throw Error(Errc::InvalidArgument, "speaker name is empty");
  if (options.expected_size && *options.expected_size != entries.size())
    throw Error(Errc::SizeMismatch, "expected " + std::to_string(*options.expected_size) + " responses, got " +
                                        std::to_string(entries.size()));
  Campaign c;
  c.id = std::move(id);
  std::set<std::string> seen;
  for (const auto& e : entries) {
    const char* missing = trim(e.response_id).empty()    ? "response id"
                          : trim(e.persona).empty()      ? "persona"
                          : trim(e.persona_text).empty() ? "persona text"
                          : trim(e.counterpart).empty()  ? "counterpart"
                          : trim(e.scenario).empty()     ? "scenario"
                          : trim(e.response).empty()     ? "response text"
                                                         : nullptr;
    if (missing)
      throw Error(Errc::MissingMetadata, "response '" + e.response_id + "' has no " + missing);
    if (!valid_id(e.response_id))
      throw Error(Errc::MissingMetadata, "response id '" + e.response_id + "' must match [A-Za-z0-9_.-]+");
    if (!seen.insert(e.response_id).second)
      throw Error(Errc::DuplicateTask, "response '" + e.response_id + "' appears twice");
    EvalTask t;
    t.id = task_id_for(e.response_id);
    t.response_id = e.response_id;
    t.speaker = options.speaker;
    t.persona = e.persona;
    t.persona_text = e.persona_text;
    t.counterpart = e.counterpart;
    t.scenario = e.scenario;
    t.response = e.response;
    t.instruction = instruction_text(options.speaker);
    t.statements = statement_texts(options.speaker);
    c.tasks.push_back(std::move(t));
  }
  std::sort(c.tasks.begin(), c.tasks.end(), [](const EvalTask& a, const EvalTask& b) { return a.id < b.id; });
  return c;
}

CampaignEntry entry_for(const prompt::Scenario& scenario, const prompt::PromptBundle& bundle,
                        const gen::GeneratedResponse& response) {
  CampaignEntry e;
  e.response_id = response.id;
  e.response = response.text;
  if (scenario.kind() == prompt::ScenarioKind::NpcInteraction) {
    e.persona = scenario.npc().persona;
    e.persona_text = bundle.persona;
    e.counterpart = scenario.npc().npc;
    e.scenario = scenario.npc().utterance;
  } else {
    e.counterpart = scenario.battle().boss;
    e.scenario = scenario.battle().situation;
  }
  return e;
}

void validate_score(double score) {
  if (!std::isfinite(score) || score < 1.0 || score > 5.0)
    throw Error(Errc::ScoreOutOfRange, "score " + std::to_string(score) + " is outside [1.0, 5.0]");
  const double twice = score * 2;
  if (std::abs(twice - std::round(twice)) > 1e-9)
    throw Error(Errc::ScoreNotHalfStep, "score " + std::to_string(score) + " is not a multiple of 0.5");
}

const Rating& submit_rating(Campaign& campaign, Rating rating) {
  if (!campaign.find(rating.task_id)) throw Error(Errc::UnknownTask, "no task '" + rating.task_id + "'");
  if (trim(rating.evaluator).empty()) throw Error(Errc::InvalidArgument, "evaluator id is empty");
  validate_score(rating.s1);
  validate_score(rating.s2);
  for (const auto& r : campaign.ratings)
    if (r.task_id == rating.task_id && r.evaluator == rating.evaluator)
      throw Error(Errc::DuplicateRating, rating.evaluator + " already rated " + rating.task_id);
  rating.s1 = std::round(rating.s1 * 2) / 2;
  rating.s2 = std::round(rating.s2 * 2) / 2;
  campaign.ratings.push_back(std::move(rating));
  return campaign.ratings.back();
}

const EvalTask* next_task(const Campaign& campaign, std::string_view evaluator) {
  std::set<std::string_view> rated;
  for (const auto& r : campaign.ratings)
    if (r.evaluator == evaluator) rated.insert(r.task_id);
  for (const auto& t : campaign.tasks)
    if (!rated.count(t.id)) return &t;
  return nullptr;
}

Progress progress(const Campaign& campaign, std::string_view evaluator) {
  Progress p;
  p.total = campaign.tasks.size();
  for (const auto& r : campaign.ratings)
    if (r.evaluator == evaluator) ++p.rated;
  return p;
}

nlohmann::ordered_json to_json(const EvalTask& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["response_id"] = t.response_id;
  j["speaker"] = t.speaker;
  j["persona"] = t.persona;
  j["persona_text"] = t.persona_text;
  j["counterpart"] = t.counterpart;
  j["scenario"] = t.scenario;
  j["response"] = t.response;
  j["instruction"] = t.instruction;
  j["statements"] = nlohmann::ordered_json::array();
  for (const auto& s : t.statements) j["statements"].push_back({{"key", s.key}, {"text", s.text}});
  return j;
}

EvalTask task_from_json(const nlohmann::json& j) {
  EvalTask t;
  try {
    t.id = j.at("id").get<std::string>();
    t.response_id = j.at("response_id").get<std::string>();
    t.speaker = j.at("speaker").get<std::string>();
    t.persona = j.at("persona").get<std::string>();
    t.persona_text = j.at("persona_text").get<std::string>();
    t.counterpart = j.at("counterpart").get<std::string>();
    t.scenario = j.at("scenario").get<std::string>();
    t.response = j.at("response").get<std::string>();
    t.instruction = j.at("instruction").get<std::string>();
    const auto& st = j.at("statements");
    if (st.size() != 2) throw Error(Errc::InvalidArgument, "task '" + t.id + "' must carry exactly two statements");
    for (std::size_t i = 0; i < 2; ++i)
      t.statements[i] = {st[i].at("key").get<std::string>(), st[i].at("text").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("task: ") + e.what());
  }
  return t;
}

nlohmann::ordered_json to_json(const Rating& r) {
  nlohmann::ordered_json j;
  j["task_id"] = r.task_id;
  j["evaluator"] = r.evaluator;
  j["s1"] = r.s1;
  j["s2"] = r.s2;
  j["timestamp"] = r.timestamp;
  return j;
}

Rating rating_from_json(const nlohmann::json& j) {
  Rating r;
  try {
    r.task_id = j.at("task_id").get<std::string>();
    r.evaluator = j.at("evaluator").get<std::string>();
    r.s1 = j.at("s1").get<double>();
    r.s2 = j.at("s2").get<double>();
    r.timestamp = j.value("timestamp", "");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("rating: ") + e.what());
  }
  return r;
}

}  // namespace kgdf::eval
