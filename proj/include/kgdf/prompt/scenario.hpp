#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace kgdf::prompt {

enum class ScenarioKind { Battle, NpcInteraction };

std::string_view to_string(ScenarioKind k) noexcept;  // "battle" / "npc-interaction"
ScenarioKind scenario_kind_from_string(std::string_view text);

struct PartyNote {
  std::string character;
  std::string state;  // free text, e.g. "health is very low"
  friend bool operator==(const PartyNote&, const PartyNote&) = default;
};

struct BattleScenario {
  std::string speaker;    // party member who talks, e.g. Cloud
  std::string boss;
  std::string situation;  // e.g. "When Scorpion Sentinel first activates its Auto-Repair"
  std::vector<PartyNote> party;
  std::optional<int> boss_health;  // percent, 0-100
  friend bool operator==(const BattleScenario&, const BattleScenario&) = default;
};

struct NpcScenario {
  std::string persona;    // persona key, e.g. "talkative"
  std::string npc;
  std::string utterance;  // the NPC's line, kept byte-for-byte
  friend bool operator==(const NpcScenario&, const NpcScenario&) = default;
};

struct Scenario {
  std::string id;  // [A-Za-z0-9_.-]+
  std::string game;
  std::variant<BattleScenario, NpcScenario> body;

  ScenarioKind kind() const noexcept {
    return std::holds_alternative<BattleScenario>(body) ? ScenarioKind::Battle : ScenarioKind::NpcInteraction;
  }
  const BattleScenario& battle() const;  // WrongScenarioKind otherwise
  const NpcScenario& npc() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws InvalidScenario when an id is malformed, a required field is blank
// or the boss health is outside [0, 100].
void validate_scenario(const Scenario& s);

// The scenario section of a prompt. Battle: "[situation]" followed by one
// line per party note and the boss health when known. NPC: "<npc>: " and the
// utterance verbatim.
std::string scenario_text(const Scenario& s);

nlohmann::ordered_json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j, std::string_view game);

// Scenario file: {"game": "...", "scenarios": [{...}, ...]}. Ids must be
// unique. Errors are InvalidScenario naming the entry.
std::vector<Scenario> parse_scenario_file(const nlohmann::json& j);
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);
nlohmann::ordered_json scenario_file_json(std::string_view game, const std::vector<Scenario>& scenarios);

}  // namespace kgdf::prompt
