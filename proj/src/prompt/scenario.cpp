#include "kgdf/prompt/scenario.hpp"

#include <cctype>
#include <set>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::prompt {

std::string_view to_string(ScenarioKind k) noexcept {
  return k == ScenarioKind::Battle ? "battle" : "npc-interaction";
}

ScenarioKind scenario_kind_from_string(std::string_view text) {
  if (text == "battle") return ScenarioKind::Battle;
  if (text == "npc-interaction") return ScenarioKind::NpcInteraction;
  throw Error(Errc::InvalidScenario, "unknown scenario kind '" + std::string(text) + "'");
}

const BattleScenario& Scenario::battle() const {
  if (auto* b = std::get_if<BattleScenario>(&body)) return *b;
  throw Error(Errc::WrongScenarioKind, id + " is not a battle scenario");
}

const NpcScenario& Scenario::npc() const {
  if (auto* n = std::get_if<NpcScenario>(&body)) return *n;
  throw Error(Errc::WrongScenarioKind, id + " is not an npc-interaction scenario");
}

namespace {

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  return true;
}

void require(bool ok, const Scenario& s, const std::string& why) {
  if (!ok) throw Error(Errc::InvalidScenario, (s.id.empty() ? std::string("scenario") : s.id) + ": " + why);
}

bool blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

void validate_scenario(const Scenario& s) {
  require(valid_id(s.id), s, "id must be non-empty and use only [A-Za-z0-9_.-]");
  require(!blank(s.game), s, "game is empty");
  if (const auto* b = std::get_if<BattleScenario>(&s.body)) {
    require(!blank(b->speaker), s, "speaker is empty");
    require(!blank(b->boss), s, "boss is empty");
    require(!blank(b->situation), s, "situation is empty");
    for (const auto& p : b->party) require(!blank(p.character) && !blank(p.state), s, "party note is incomplete");
    if (b->boss_health) require(*b->boss_health >= 0 && *b->boss_health <= 100, s, "boss health outside [0, 100]");
  } else {
    const auto& n = std::get<NpcScenario>(s.body);
    require(!blank(n.persona), s, "persona is empty");
    require(!blank(n.npc), s, "npc is empty");
    require(!blank(n.utterance), s, "utterance is empty");
  }
}

std::string scenario_text(const Scenario& s) {
  if (const auto* b = std::get_if<BattleScenario>(&s.body)) {
    std::string text = "[" + b->situation + "]";
    for (const auto& p : b->party) text += "\n" + p.character + ": " + p.state;
    if (b->boss_health) text += "\n" + b->boss + " health: " + std::to_string(*b->boss_health) + "%";
    return text;
  }
  const auto& n = std::get<NpcScenario>(s.body);
  return n.npc + ": " + n.utterance;
}

nlohmann::ordered_json to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["kind"] = to_string(s.kind());
  if (const auto* b = std::get_if<BattleScenario>(&s.body)) {
    j["speaker"] = b->speaker;
    j["boss"] = b->boss;
    j["situation"] = b->situation;
    if (!b->party.empty()) {
      j["party"] = nlohmann::ordered_json::array();
      for (const auto& p : b->party) j["party"].push_back({{"character", p.character}, {"state", p.state}});
    }
    if (b->boss_health) j["boss_health"] = *b->boss_health;
  } else {
    const auto& n = std::get<NpcScenario>(s.body);
    j["persona"] = n.persona;
    j["npc"] = n.npc;
    j["utterance"] = n.utterance;
  }
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j, std::string_view game) {
  Scenario s;
  try {
    s.id = j.at("id").get<std::string>();
    s.game = j.contains("game") ? j["game"].get<std::string>() : std::string(game);
    if (scenario_kind_from_string(j.at("kind").get<std::string>()) == ScenarioKind::Battle) {
      BattleScenario b;
      b.speaker = j.at("speaker").get<std::string>();
      b.boss = j.at("boss").get<std::string>();
      b.situation = j.at("situation").get<std::string>();
      for (const auto& p : j.value("party", nlohmann::json::array()))
        b.party.push_back({p.at("character").get<std::string>(), p.at("state").get<std::string>()});
      if (j.contains("boss_health")) b.boss_health = j["boss_health"].get<int>();
      s.body = std::move(b);
    } else {
      s.body = NpcScenario{j.at("persona").get<std::string>(), j.at("npc").get<std::string>(),
                           j.at("utterance").get<std::string>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidScenario, (s.id.empty() ? std::string("scenario") : s.id) + ": " + e.what());
  }
  validate_scenario(s);
  return s;
}

std::vector<Scenario> parse_scenario_file(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("game") || !j.contains("scenarios") || !j["scenarios"].is_array())
    throw Error(Errc::InvalidScenario, "scenario file needs \"game\" and a \"scenarios\" array");
  const auto game = j["game"].get<std::string>();
  std::vector<Scenario> out;
  std::set<std::string> seen;
  for (const auto& entry : j["scenarios"]) {
    auto s = scenario_from_json(entry, game);
    if (!seen.insert(s.id).second) throw Error(Errc::InvalidScenario, "duplicate scenario id '" + s.id + "'");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path) {
  try {
    return parse_scenario_file(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::InvalidScenario, path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json scenario_file_json(std::string_view game, const std::vector<Scenario>& scenarios) {
  nlohmann::ordered_json j;
  j["game"] = game;
  j["scenarios"] = nlohmann::ordered_json::array();
  for (const auto& s : scenarios) {
    auto entry = to_json(s);
    if (s.game != game) entry["game"] = s.game;
    j["scenarios"].push_back(std::move(entry));
  }
  return j;
}

}  // namespace kgdf::prompt
