#include "kgdf/prompt/bundle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_set>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::prompt {

std::string_view slot_name(Slot s) noexcept {
  switch (s) {
    case Slot::Instruction: return "instruction";
    case Slot::SpeakerTriples: return "speaker_triples";
    case Slot::CounterpartTriples: return "counterpart_triples";
    case Slot::Scenario: return "scenario";
    case Slot::Persona: return "persona";
  }
  return "instruction";
}

const std::vector<Slot>& slot_order(ScenarioKind kind) {
  static const std::vector<Slot> battle = {Slot::Instruction, Slot::SpeakerTriples, Slot::CounterpartTriples,
                                           Slot::Scenario};
  static const std::vector<Slot> npc = {Slot::Instruction, Slot::Persona, Slot::CounterpartTriples, Slot::Scenario};
  return kind == ScenarioKind::Battle ? battle : npc;
}

namespace {

std::optional<Slot> slot_from_name(std::string_view name) {
  for (auto s : {Slot::Instruction, Slot::SpeakerTriples, Slot::CounterpartTriples, Slot::Scenario, Slot::Persona})
    if (slot_name(s) == name) return s;
  return std::nullopt;
}

struct Segment {
  std::string literal;
  std::optional<Slot> slot;
};

std::vector<Segment> split_layout(std::string_view layout) {
  std::vector<Segment> segments;
  std::size_t pos = 0;
  while (pos < layout.size()) {
    const auto open = layout.find("{{", pos);
    if (open == std::string_view::npos) {
      segments.push_back({std::string(layout.substr(pos)), std::nullopt});
      break;
    }
    const auto close = layout.find("}}", open + 2);
    if (close == std::string_view::npos) throw Error(Errc::InvalidTemplate, "unterminated placeholder");
    const auto name = layout.substr(open + 2, close - open - 2);
    auto slot = slot_from_name(name);
    if (!slot) throw Error(Errc::InvalidTemplate, "unknown placeholder {{" + std::string(name) + "}}");
    if (open > pos) segments.push_back({std::string(layout.substr(pos, open - pos)), std::nullopt});
    segments.push_back({"", slot});
    pos = close + 2;
  }
  return segments;
}

std::string strip_trailing_blank_lines(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.pop_back();
  return text;
}

std::string triple_lines(const std::vector<kg::Triple>& triples) {
  std::string out;
  for (const auto& t : triples) {
    if (!out.empty()) out += '\n';
    out += kg::serialize_triple(t);
  }
  return out;
}

bool triple_order(const kg::Triple& a, const kg::Triple& b) {
  const auto pa = to_lower_ascii(a.predicate()), pb = to_lower_ascii(b.predicate());
  if (pa != pb) return pa < pb;
  return a.object() < b.object();
}

std::vector<kg::Triple> normalize_triples(const std::vector<kg::Triple>& in,
                                          std::unordered_set<std::string>& seen) {
  std::vector<kg::Triple> out;
  for (const auto& t : in)
    if (seen.insert(t.key()).second) out.push_back(t);
  std::stable_sort(out.begin(), out.end(), triple_order);
  return out;
}

void check_length(const PromptBundle& b) {
  const auto size = render(b).size();
  if (b.max_chars > 0 && size > b.max_chars)
    throw Error(Errc::PromptTooLong, b.id + ": " + std::to_string(size) + " bytes exceeds the template limit of " +
                                         std::to_string(b.max_chars));
}

}  // namespace

void validate_layout(std::string_view layout, ScenarioKind kind) {
  std::vector<Slot> found;
  for (const auto& seg : split_layout(layout))
    if (seg.slot) found.push_back(*seg.slot);
  const auto& expected = slot_order(kind);
  if (found != expected) {
    std::string want;
    for (auto s : expected) want += " {{" + std::string(slot_name(s)) + "}}";
    throw Error(Errc::InvalidTemplate,
                std::string(to_string(kind)) + " layout must contain, once each and in order:" + want);
  }
}

Template Template::parse(std::string_view text) {
  Template t;
  enum class Block { Header, Instruction, Layout } block = Block::Header;
  bool have_kind = false;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::InvalidTemplate, "line " + std::to_string(line_no) + ": " + why);
    };
    if (block == Block::Layout) {
      t.layout_ += line + "\n";
      continue;
    }
    if (line == "@instruction") {
      block = Block::Instruction;
      continue;
    }
    if (line == "@layout") {
      block = Block::Layout;
      continue;
    }
    if (block == Block::Instruction) {
      t.instruction_ += line + "\n";
      continue;
    }
    auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto space = trimmed.find(' ');
    const auto key = trimmed.substr(0, space);
    const auto value = space == std::string_view::npos ? std::string_view{} : trim(trimmed.substr(space));
    if (value.empty()) fail("directive without a value");
    if (key == "@version") {
      t.version_ = std::string(value);
    } else if (key == "@kind") {
      try {
        t.kind_ = scenario_kind_from_string(value);
      } catch (const Error&) {
        fail("unknown kind '" + std::string(value) + "'");
      }
      have_kind = true;
    } else if (key == "@game") {
      t.game_ = std::string(value);
    } else if (key == "@max-chars") {
      try {
        t.max_chars_ = std::stoul(std::string(value));
      } catch (const std::exception&) {
        fail("bad @max-chars value");
      }
    } else {
      fail("unknown directive '" + std::string(key) + "'");
    }
  }
  if (t.version_.empty() || !have_kind || t.game_.empty())
    throw Error(Errc::InvalidTemplate, "template needs @version, @kind and @game");
  t.instruction_ = strip_trailing_blank_lines(std::move(t.instruction_));
  t.layout_ = strip_trailing_blank_lines(std::move(t.layout_)) + "\n";
  if (trim(t.instruction_).empty()) throw Error(Errc::InvalidTemplate, "empty @instruction block");
  validate_layout(t.layout_, t.kind_);
  return t;
}

Template Template::load(const std::filesystem::path& path) {
  try {
    return parse(read_file(path));
  } catch (const Error& e) {
    if (e.code() != Errc::InvalidTemplate) throw;
    throw Error(Errc::InvalidTemplate, path.filename().string() + ": " + e.detail());
  }
}

std::vector<std::pair<std::string, std::string>> PromptBundle::sections() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto slot : slot_order(kind)) {
    std::string text;
    switch (slot) {
      case Slot::Instruction: text = instruction; break;
      case Slot::SpeakerTriples: text = triple_lines(speaker_triples); break;
      case Slot::CounterpartTriples: text = triple_lines(counterpart_triples); break;
      case Slot::Scenario: text = scenario; break;
      case Slot::Persona: text = persona; break;
    }
    out.emplace_back(slot_name(slot), std::move(text));
  }
  return out;
}

std::string render(const PromptBundle& b) {
  std::map<Slot, std::string> values;
  const auto sections = b.sections();
  for (std::size_t i = 0; i < sections.size(); ++i) values[slot_order(b.kind)[i]] = sections[i].second;
  std::string out;
  for (const auto& seg : split_layout(b.layout)) out += seg.slot ? values[*seg.slot] : seg.literal;
  return out;
}

PromptBundle assemble_battle_prompt(const std::vector<kg::Triple>& speaker, const std::vector<kg::Triple>& boss,
                                    const Scenario& scenario, const Template& tmpl) {
  const auto& battle = scenario.battle();
  if (tmpl.kind() != ScenarioKind::Battle)
    throw Error(Errc::WrongScenarioKind, "template " + tmpl.version() + " is not a battle template");
  if (speaker.empty()) throw Error(Errc::EmptySubgraph, "no triples for " + battle.speaker);
  if (boss.empty()) throw Error(Errc::EmptySubgraph, "no triples for " + battle.boss);
  PromptBundle b;
  b.id = scenario.id;
  b.kind = ScenarioKind::Battle;
  b.game = scenario.game;
  b.template_version = tmpl.version();
  b.instruction = tmpl.instruction();
  std::unordered_set<std::string> seen;
  b.speaker_triples = normalize_triples(speaker, seen);
  b.counterpart_triples = normalize_triples(boss, seen);
  b.scenario = scenario_text(scenario);
  b.layout = tmpl.layout();
  b.max_chars = tmpl.max_chars();
  check_length(b);
  return b;
}

PromptBundle assemble_npc_prompt(const Persona& persona, const std::vector<kg::Triple>& npc,
                                 const Scenario& scenario, const Template& tmpl) {
  const auto& interaction = scenario.npc();
  if (tmpl.kind() != ScenarioKind::NpcInteraction)
    throw Error(Errc::WrongScenarioKind, "template " + tmpl.version() + " is not an npc-interaction template");
  if (persona.game != tmpl.game() || persona.game != scenario.game)
    throw Error(Errc::PersonaGameMismatch,
                "persona '" + persona.key + "' belongs to " + persona.game + ", scenario to " + scenario.game);
  if (npc.empty()) throw Error(Errc::EmptySubgraph, "no triples for " + interaction.npc);
  PromptBundle b;
  b.id = scenario.id;
  b.kind = ScenarioKind::NpcInteraction;
  b.game = scenario.game;
  b.template_version = tmpl.version();
  b.instruction = tmpl.instruction();
  b.persona = persona.name + ": " + persona.traits;
  std::unordered_set<std::string> seen;
  b.counterpart_triples = normalize_triples(npc, seen);
  b.scenario = scenario_text(scenario);
  b.layout = tmpl.layout();
  b.max_chars = tmpl.max_chars();
  check_length(b);
  return b;
}

nlohmann::ordered_json to_json(const PromptBundle& b) {
  nlohmann::ordered_json j;
  j["id"] = b.id;
  j["kind"] = to_string(b.kind);
  j["game"] = b.game;
  j["template_version"] = b.template_version;
  j["instruction"] = b.instruction;
  if (b.kind == ScenarioKind::NpcInteraction) j["persona"] = b.persona;
  auto triples = [](const std::vector<kg::Triple>& ts) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : ts) arr.push_back(kg::serialize_triple(t));
    return arr;
  };
  if (b.kind == ScenarioKind::Battle) j["speaker_triples"] = triples(b.speaker_triples);
  j["counterpart_triples"] = triples(b.counterpart_triples);
  j["scenario"] = b.scenario;
  j["layout"] = b.layout;
  j["max_chars"] = b.max_chars;
  return j;
}

PromptBundle bundle_from_json(const nlohmann::json& j) {
  PromptBundle b;
  try {
    b.id = j.at("id").get<std::string>();
    b.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
    b.game = j.at("game").get<std::string>();
    b.template_version = j.at("template_version").get<std::string>();
    b.instruction = j.at("instruction").get<std::string>();
    b.persona = j.value("persona", "");
    for (const auto& t : j.value("speaker_triples", nlohmann::json::array()))
      b.speaker_triples.push_back(kg::parse_triple(t.get<std::string>()));
    for (const auto& t : j.at("counterpart_triples")) b.counterpart_triples.push_back(kg::parse_triple(t.get<std::string>()));
    b.scenario = j.at("scenario").get<std::string>();
    b.layout = j.at("layout").get<std::string>();
    b.max_chars = j.value("max_chars", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("bundle: ") + e.what());
  }
  validate_layout(b.layout, b.kind);
  return b;
}

void save_bundle(const PromptBundle& b, const std::filesystem::path& path) {
  write_file(path, to_json(b).dump(2) + "\n");
}

PromptBundle load_bundle(const std::filesystem::path& path) {
  try {
    return bundle_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::InvalidArgument, path.string() + ": " + e.what());
  }
}

}  // namespace kgdf::prompt
