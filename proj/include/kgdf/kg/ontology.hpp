#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kgdf::kg {

// Range marker for relations whose object is a plain value rather than an
// entity.
inline constexpr std::string_view kLiteralRange = "literal";

struct Relation {
  std::string name;
  std::string domain;
  std::string range;

  bool literal_range() const noexcept { return range == kLiteralRange; }
  friend bool operator==(const Relation&, const Relation&) = default;
};

// Concepts and typed relations for one game namespace. Names are matched
// case-insensitively and stored as declared.
class Ontology {
 public:
  Ontology() = default;
  explicit Ontology(std::string game) : game_(std::move(game)) {}

  const std::string& game() const noexcept { return game_; }
  void set_game(std::string game) { game_ = std::move(game); }

  // Redeclaring an existing concept is a no-op.
  void add_concept(std::string_view name);
  // InvalidOntology when the name is taken or the domain/range is undeclared.
  void add_relation(Relation relation);

  bool has_concept(std::string_view name) const noexcept;
  const std::string* find_concept(std::string_view name) const noexcept;
  const Relation* find_relation(std::string_view name) const noexcept;

  const std::vector<std::string>& concepts() const noexcept { return concepts_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }

  // Order-independent textual form; two ontologies with equal canonical
  // text accept exactly the same triples.
  std::string canonical_text() const;
  std::string fingerprint() const;

 private:
  std::string game_;
  std::vector<std::string> concepts_;
  std::vector<Relation> relations_;
};

// Line format:
//   namespace <game>
//   concept <name>
//   relation <name> : <domain> -> <range>
// with '#' starting a comment. Relations may reference concepts declared
// later in the same text.
Ontology parse_ontology(std::string_view text);
std::string serialize_ontology(const Ontology& ontology);
Ontology load_ontology(const std::filesystem::path& path);

}  // namespace kgdf::kg
