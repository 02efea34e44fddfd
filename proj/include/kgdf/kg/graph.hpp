#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgdf/error.hpp"
#include "kgdf/kg/ontology.hpp"
#include "kgdf/kg/triple.hpp"

namespace kgdf::kg {

// Entity id -> concept, keyed case-insensitively.
class EntityIndex {
 public:
  struct Entry {
    std::string id;
    std::string concept_name;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  const Entry* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  // Returns false (and changes nothing) when the id is already present.
  bool add(std::string_view id, std::string_view concept_name);

  std::size_t size() const noexcept { return entries_.size(); }
  // Iteration is ordered by normalized id.
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const EntityIndex&, const EntityIndex&) = default;

 private:
  std::map<std::string, Entry> entries_;
};

struct ValidationResult {
  bool ok = true;
  Errc rule = Errc::InvalidArgument;
  std::string message;

  explicit operator bool() const noexcept { return ok; }
};

// Checks a triple against the ontology: the predicate must be declared, an
// indexed subject must belong to the relation's domain, and the object must
// fit the range (an indexed object must carry the range concept; a literal
// range rejects objects that are indexed entities). Never throws.
ValidationResult validate_triple(const Triple& t, const Ontology& ontology, const EntityIndex& index) noexcept;

enum class InsertOutcome { Inserted, Duplicate };

// Deduplicated triple set for one game under one ontology. Inserting a
// triple indexes its subject under the relation's domain and, for
// concept-ranged relations, its object under the range, so every indexed
// entity occurs in at least one triple.
//
// Const member functions may run concurrently; mutation needs exclusive
// access.
class KnowledgeGraph {
 public:
  KnowledgeGraph(std::string game, Ontology ontology);

  // Throws the failed validation rule (UnknownRelation, DomainMismatch,
  // RangeMismatch) as an Error. Duplicates keep the first provenance.
  InsertOutcome insert(Triple t);

  bool contains(const Triple& t) const;
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  const std::string& game() const noexcept { return game_; }
  const Ontology& ontology() const noexcept { return ontology_; }
  const EntityIndex& index() const noexcept { return index_; }
  // Insertion order.
  const std::vector<Triple>& triples() const noexcept { return triples_; }

 private:
  std::string game_;
  Ontology ontology_;
  std::vector<Triple> triples_;
  std::unordered_set<std::string> keys_;
  EntityIndex index_;
};

// Same game, same ontology, same triple set and same entity index.
bool graph_equal(const KnowledgeGraph& a, const KnowledgeGraph& b);

// Triples describing `entity`. Depth 1: triples whose subject is the entity.
// Depth 2: additionally the triples of every indexed entity that appears as
// an object at depth 1. Sorted stably by (predicate, object). Throws
// UnknownEntity for an unindexed entity and InvalidArgument for other depths.
std::vector<Triple> subgraph(const KnowledgeGraph& kg, std::string_view entity, int depth = 1);

}  // namespace kgdf::kg
