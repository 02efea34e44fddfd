#include "kgdf/kg/ontology.hpp"

#include <algorithm>
#include <sstream>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::kg {

namespace {

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](unsigned char c) {
    return c <= 0x20 || c == ',' || c == ':' || c == '#' || c == 0x7F;
  });
}

}  // namespace

void Ontology::add_concept(std::string_view name) {
  if (!valid_name(name)) throw Error(Errc::InvalidOntology, "bad concept name '" + std::string(name) + "'");
  if (iequals(name, kLiteralRange))
    throw Error(Errc::InvalidOntology, "'literal' is reserved for relation ranges");
  if (!has_concept(name)) concepts_.emplace_back(name);
}

void Ontology::add_relation(Relation relation) {
  if (!valid_name(relation.name))
    throw Error(Errc::InvalidOntology, "bad relation name '" + relation.name + "'");
  if (find_relation(relation.name))
    throw Error(Errc::InvalidOntology, "relation '" + relation.name + "' declared twice");
  const auto* domain = find_concept(relation.domain);
  if (!domain)
    throw Error(Errc::InvalidOntology,
                "relation '" + relation.name + "' has undeclared domain '" + relation.domain + "'");
  relation.domain = *domain;
  if (iequals(relation.range, kLiteralRange)) {
    relation.range = std::string(kLiteralRange);
  } else if (const auto* range = find_concept(relation.range)) {
    relation.range = *range;
  } else {
    throw Error(Errc::InvalidOntology,
                "relation '" + relation.name + "' has undeclared range '" + relation.range + "'");
  }
  relations_.push_back(std::move(relation));
}

bool Ontology::has_concept(std::string_view name) const noexcept { return find_concept(name) != nullptr; }

const std::string* Ontology::find_concept(std::string_view name) const noexcept {
  for (const auto& c : concepts_)
    if (iequals(c, name)) return &c;
  return nullptr;
}

const Relation* Ontology::find_relation(std::string_view name) const noexcept {
  for (const auto& r : relations_)
    if (iequals(r.name, name)) return &r;
  return nullptr;
}

std::string Ontology::canonical_text() const {
  std::vector<std::string> lines;
  lines.reserve(concepts_.size() + relations_.size() + 1);
  for (const auto& c : concepts_) lines.push_back("concept " + c);
  for (const auto& r : relations_) lines.push_back("relation " + r.name + " : " + r.domain + " -> " + r.range);
  std::sort(lines.begin(), lines.end());
  std::string out = "namespace " + game_ + "\n";
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string Ontology::fingerprint() const { return sha256_hex(canonical_text()).substr(0, 16); }

Ontology parse_ontology(std::string_view text) {
  struct PendingRelation {
    Relation relation;
    std::size_t line;
  };
  Ontology ontology;
  std::vector<PendingRelation> pending;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream in{std::string(line)};
    std::string keyword;
    in >> keyword;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::InvalidOntology, "line " + std::to_string(line_no) + ": " + why);
    };
    if (keyword == "namespace") {
      std::string game, extra;
      if (!(in >> game) || (in >> extra)) fail("expected 'namespace <game>'");
      ontology.set_game(game);
    } else if (keyword == "concept") {
      std::string name, extra;
      if (!(in >> name) || (in >> extra)) fail("expected 'concept <name>'");
      try {
        ontology.add_concept(name);
      } catch (const Error& e) {
        fail(e.detail());
      }
    } else if (keyword == "relation") {
      std::string name, colon, domain, arrow, range, extra;
      if (!(in >> name >> colon >> domain >> arrow >> range) || colon != ":" || arrow != "->" || (in >> extra))
        fail("expected 'relation <name> : <domain> -> <range>'");
      pending.push_back({Relation{name, domain, range}, line_no});
    } else {
      fail("unknown directive '" + keyword + "'");
    }
  }
  for (auto& p : pending) {
    try {
      ontology.add_relation(std::move(p.relation));
    } catch (const Error& e) {
      throw Error(Errc::InvalidOntology, "line " + std::to_string(p.line) + ": " + e.detail());
    }
  }
  return ontology;
}

std::string serialize_ontology(const Ontology& ontology) {
  std::string out;
  if (!ontology.game().empty()) out += "namespace " + ontology.game() + "\n";
  for (const auto& c : ontology.concepts()) out += "concept " + c + "\n";
  for (const auto& r : ontology.relations())
    out += "relation " + r.name + " : " + r.domain + " -> " + r.range + "\n";
  return out;
}

Ontology load_ontology(const std::filesystem::path& path) { return parse_ontology(read_file(path)); }

}  // namespace kgdf::kg
