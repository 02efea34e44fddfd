#include "kgdf/kg/kg_file.hpp"

#include <json.hpp>
#include <optional>
#include <vector>

#include "kgdf/text.hpp"

namespace kgdf::kg {

namespace {

constexpr std::string_view kMagic = "#! kgdf-kg 1";

[[noreturn]] void corrupt(std::size_t line, const std::string& why) {
  throw Error(Errc::CorruptFile, "line " + std::to_string(line) + ": " + why);
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace

std::string provenance_comment(const Provenance& p) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(p.kind));
  if (!p.source.empty()) j["source"] = p.source;
  if (!p.tool.empty()) j["tool"] = p.tool;
  return j.dump();
}

Provenance parse_provenance_comment(std::string_view json) {
  auto j = nlohmann::json::parse(json);
  Provenance p;
  p.kind = provenance_kind_from_string(j.at("kind").get<std::string>());
  p.source = j.value("source", "");
  p.tool = j.value("tool", "");
  return p;
}

std::string serialize_graph(const KnowledgeGraph& kg) {
  std::string out;
  out += kMagic;
  out += "\n@game " + kg.game() + "\n";
  out += "@ontology " + kg.ontology().fingerprint() + "\n";
  out += serialize_ontology(kg.ontology());
  out += "@end\n";
  for (const auto& [key, entry] : kg.index()) out += "@entity " + entry.concept_name + " " + entry.id + "\n";
  for (const auto& t : kg.triples()) out += serialize_triple(t) + "\t# " + provenance_comment(t.provenance()) + "\n";
  return out;
}

KnowledgeGraph parse_graph(std::string_view text, const Ontology* expected) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kMagic) corrupt(1, "missing '#! kgdf-kg 1' header");

  std::size_t i = 1;
  auto next_directive = [&](std::string_view name) -> std::string {
    if (i >= lines.size() || !starts_with(lines[i], name)) corrupt(i + 1, "expected '" + std::string(name) + "'");
    auto value = std::string(trim(std::string_view(lines[i]).substr(name.size())));
    ++i;
    return value;
  };
  std::string game = next_directive("@game ");
  std::string fingerprint = next_directive("@ontology ");

  const std::size_t ontology_start = i;
  std::string ontology_text;
  while (i < lines.size() && lines[i] != "@end") ontology_text += lines[i++] + "\n";
  if (i == lines.size()) corrupt(i, "unterminated ontology block");
  ++i;

  Ontology ontology;
  try {
    ontology = parse_ontology(ontology_text);
  } catch (const Error& e) {
    corrupt(ontology_start + 1, e.detail());
  }
  if (ontology.fingerprint() != fingerprint)
    corrupt(ontology_start, "ontology block does not match fingerprint " + fingerprint);
  if (expected && expected->fingerprint() != fingerprint)
    throw Error(Errc::OntologyMismatch,
                "file written under ontology " + fingerprint + ", expected " + expected->fingerprint());

  KnowledgeGraph kg(game, std::move(ontology));
  EntityIndex declared;
  for (; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t line_no = i + 1;
    if (trim(line).empty()) continue;
    if (starts_with(line, "@entity ")) {
      auto rest = line.substr(8);
      auto space = rest.find(' ');
      if (space == std::string_view::npos) corrupt(line_no, "expected '@entity <concept> <id>'");
      auto concept_name = rest.substr(0, space);
      auto id = trim(rest.substr(space + 1));
      if (id.empty()) corrupt(line_no, "empty entity id");
      if (!kg.ontology().has_concept(concept_name))
        corrupt(line_no, "undeclared concept '" + std::string(concept_name) + "'");
      declared.add(id, concept_name);
      continue;
    }
    auto tab = line.find("\t# ");
    auto triple_text = tab == std::string_view::npos ? line : line.substr(0, tab);
    try {
      Provenance provenance;
      if (tab != std::string_view::npos) provenance = parse_provenance_comment(line.substr(tab + 3));
      kg.insert(parse_triple(triple_text, std::move(provenance)));
    } catch (const Error& e) {
      corrupt(line_no, e.what());
    } catch (const std::exception& e) {
      corrupt(line_no, std::string("bad provenance comment: ") + e.what());
    }
  }
  if (!(declared == kg.index())) corrupt(lines.size(), "declared entity index disagrees with the triples");
  return kg;
}

void persist(const KnowledgeGraph& kg, const std::filesystem::path& path) { write_file(path, serialize_graph(kg)); }

KnowledgeGraph load(const std::filesystem::path& path, const Ontology* expected) {
  return parse_graph(read_file(path), expected);
}

KnowledgeGraph graph_from_triple_list(std::string_view game, const Ontology& ontology, std::string_view text,
                                      std::string_view source) {
  KnowledgeGraph kg{std::string(game), ontology};
  const Provenance provenance{ProvenanceKind::Manual, std::string(source), ""};
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      kg.insert(parse_triple(line, provenance));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(source) + " line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return kg;
}

}  // namespace kgdf::kg
