#include "kgdf/kg/graph.hpp"

#include <algorithm>
#include <set>

#include "kgdf/text.hpp"

namespace kgdf::kg {

const EntityIndex::Entry* EntityIndex::find(std::string_view id) const {
  auto it = entries_.find(to_lower_ascii(id));
  return it == entries_.end() ? nullptr : &it->second;
}

bool EntityIndex::add(std::string_view id, std::string_view concept_name) {
  return entries_.emplace(to_lower_ascii(id), Entry{std::string(id), std::string(concept_name)}).second;
}

ValidationResult validate_triple(const Triple& t, const Ontology& ontology, const EntityIndex& index) noexcept {
  try {
    const Relation* relation = ontology.find_relation(t.predicate());
    if (!relation)
      return {false, Errc::UnknownRelation, "relation '" + t.predicate() + "' is not declared"};
    if (const auto* subject = index.find(t.subject()); subject && !iequals(subject->concept_name, relation->domain))
      return {false, Errc::DomainMismatch,
              "'" + t.subject() + "' is a " + subject->concept_name + " but '" + relation->name +
                  "' applies to " + relation->domain};
    const auto* object = index.find(t.object());
    if (relation->literal_range()) {
      if (object)
        return {false, Errc::RangeMismatch,
                "'" + relation->name + "' takes a literal but '" + t.object() + "' is a " +
                    object->concept_name};
    } else if (object && !iequals(object->concept_name, relation->range)) {
      return {false, Errc::RangeMismatch,
              "'" + relation->name + "' expects a " + relation->range + " but '" + t.object() + "' is a " +
                  object->concept_name};
    }
    return {};
  } catch (...) {
    return {false, Errc::InvalidArgument, "validation failed unexpectedly"};
  }
}

KnowledgeGraph::KnowledgeGraph(std::string game, Ontology ontology)
    : game_(std::move(game)), ontology_(std::move(ontology)) {}

InsertOutcome KnowledgeGraph::insert(Triple t) {
  if (keys_.count(t.key())) return InsertOutcome::Duplicate;
  auto verdict = validate_triple(t, ontology_, index_);
  if (!verdict) throw Error(verdict.rule, verdict.message);
  const Relation& relation = *ontology_.find_relation(t.predicate());
  index_.add(t.subject(), relation.domain);
  if (!relation.literal_range()) index_.add(t.object(), relation.range);
  keys_.insert(t.key());
  triples_.push_back(std::move(t));
  return InsertOutcome::Inserted;
}

bool KnowledgeGraph::contains(const Triple& t) const { return keys_.count(t.key()) > 0; }

bool graph_equal(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (a.game() != b.game() || a.ontology().canonical_text() != b.ontology().canonical_text()) return false;
  if (a.size() != b.size() || !(a.index() == b.index())) return false;
  return std::all_of(a.triples().begin(), a.triples().end(), [&](const Triple& t) { return b.contains(t); });
}

std::vector<Triple> subgraph(const KnowledgeGraph& kg, std::string_view entity, int depth) {
  if (depth != 1 && depth != 2) throw Error(Errc::InvalidArgument, "subgraph depth must be 1 or 2");
  if (!kg.index().contains(entity)) throw Error(Errc::UnknownEntity, "'" + std::string(entity) + "' is not indexed");

  std::set<std::string> subjects{to_lower_ascii(entity)};
  if (depth == 2) {
    for (const auto& t : kg.triples())
      if (iequals(t.subject(), entity) && kg.index().contains(t.object()))
        subjects.insert(to_lower_ascii(t.object()));
  }
  std::vector<Triple> out;
  for (const auto& t : kg.triples())
    if (subjects.count(to_lower_ascii(t.subject()))) out.push_back(t);
  std::stable_sort(out.begin(), out.end(), [](const Triple& a, const Triple& b) {
    const auto pa = to_lower_ascii(a.predicate());
    const auto pb = to_lower_ascii(b.predicate());
    if (pa != pb) return pa < pb;
    return a.object() < b.object();
  });
  return out;
}

}  // namespace kgdf::kg
