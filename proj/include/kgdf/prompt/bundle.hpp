#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgdf/kg/triple.hpp"
#include "kgdf/prompt/persona.hpp"
#include "kgdf/prompt/scenario.hpp"

namespace kgdf::prompt {

// Placeholders a layout may contain, written {{name}}.
enum class Slot { Instruction, SpeakerTriples, CounterpartTriples, Scenario, Persona };
std::string_view slot_name(Slot s) noexcept;

// Section order for each kind. A layout must contain exactly these
// placeholders, once each, in this order.
const std::vector<Slot>& slot_order(ScenarioKind kind);

// Instruction template file:
//
//   @version <tag>
//   @kind battle|npc-interaction
//   @game <game id>
//   @max-chars <n>
//   @instruction
//   <instruction text, any number of lines>
//   @layout
//   <layout text with placeholders, to end of file>
//
// Trailing blank lines of both blocks are dropped.
class Template {
 public:
  static Template parse(std::string_view text);  // InvalidTemplate
  static Template load(const std::filesystem::path& path);

  const std::string& version() const noexcept { return version_; }
  ScenarioKind kind() const noexcept { return kind_; }
  const std::string& game() const noexcept { return game_; }
  std::size_t max_chars() const noexcept { return max_chars_; }
  const std::string& instruction() const noexcept { return instruction_; }
  const std::string& layout() const noexcept { return layout_; }

 private:
  std::string version_;
  ScenarioKind kind_ = ScenarioKind::Battle;
  std::string game_;
  std::size_t max_chars_ = 0;
  std::string instruction_;
  std::string layout_;
};

// Checks a layout against the slot order of `kind`. InvalidTemplate on an
// unknown, missing, repeated or misplaced placeholder.
void validate_layout(std::string_view layout, ScenarioKind kind);

struct PromptBundle {
  std::string id;  // scenario id
  ScenarioKind kind = ScenarioKind::Battle;
  std::string game;
  std::string template_version;
  std::string instruction;
  std::string persona;                       // npc kind only
  std::vector<kg::Triple> speaker_triples;   // battle kind only
  std::vector<kg::Triple> counterpart_triples;  // boss or npc triples
  std::string scenario;
  std::string layout;
  std::size_t max_chars = 0;

  // (slot name, rendered section text) in the kind's slot order.
  std::vector<std::pair<std::string, std::string>> sections() const;
  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

// Sections are [instruction, speaker triples, boss triples, situation].
// Triples are deduplicated and sorted by (predicate, object); a triple in both
// subgraphs is kept only in the speaker section.
// Errors: WrongScenarioKind, EmptySubgraph, PromptTooLong.
PromptBundle assemble_battle_prompt(const std::vector<kg::Triple>& speaker, const std::vector<kg::Triple>& boss,
                                    const Scenario& scenario, const Template& tmpl);

// Sections are [instruction, persona, npc triples, utterance].
// Errors: WrongScenarioKind, PersonaGameMismatch, EmptySubgraph, PromptTooLong.
PromptBundle assemble_npc_prompt(const Persona& persona, const std::vector<kg::Triple>& npc,
                                 const Scenario& scenario, const Template& tmpl);

// Fills the layout in one pass, so text inside a section is never
// re-expanded. Triple sections hold one serialized triple per line.
std::string render(const PromptBundle& b);

nlohmann::ordered_json to_json(const PromptBundle& b);
PromptBundle bundle_from_json(const nlohmann::json& j);
void save_bundle(const PromptBundle& b, const std::filesystem::path& path);
PromptBundle load_bundle(const std::filesystem::path& path);

}  // namespace kgdf::prompt
