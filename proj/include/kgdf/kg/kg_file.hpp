#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "kgdf/kg/graph.hpp"

namespace kgdf::kg {

// On-disk layout:
//
//   #! kgdf-kg 1
//   @game <game id>
//   @ontology <fingerprint>
//   <ontology lines, same syntax as an ontology file>
//   @end
//   @entity <concept> <entity id>            (one per indexed entity)
//   (subject, predicate, object)\t# {"kind":...,"source":...,"tool":...}
//
// Triples appear in insertion order so reloading rebuilds the same index.
std::string serialize_graph(const KnowledgeGraph& kg);

// Throws CorruptFile (with a line number) on any syntax or consistency
// problem, and OntologyMismatch when `expected` is given and the file was
// written under a different ontology.
KnowledgeGraph parse_graph(std::string_view text, const Ontology* expected = nullptr);

void persist(const KnowledgeGraph& kg, const std::filesystem::path& path);
KnowledgeGraph load(const std::filesystem::path& path, const Ontology* expected = nullptr);

// Builds a graph from a hand-written triple list: one "(s, p, o)" per line,
// blank lines and '#' comments ignored. Every triple gets manual provenance
// naming `source`. Errors keep their code and gain the line number.
KnowledgeGraph graph_from_triple_list(std::string_view game, const Ontology& ontology, std::string_view text,
                                      std::string_view source);

// Provenance annotation used after a triple on persisted lines.
std::string provenance_comment(const Provenance& p);
Provenance parse_provenance_comment(std::string_view json);

}  // namespace kgdf::kg
