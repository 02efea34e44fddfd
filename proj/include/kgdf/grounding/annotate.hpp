#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgdf/grounding/lexicon.hpp"

namespace kgdf::grounding {

enum class Label { Knowledge, Situation };
std::string_view to_string(Label l) noexcept;  // "KNOWLEDGE" / "SITUATION"
Label label_from_string(std::string_view text);

struct Span {
  std::size_t start = 0;  // byte offsets into the response
  std::size_t end = 0;
  Label label = Label::Knowledge;
  std::string lexeme;
  std::string source;  // triple id or "scenario"
  std::size_t tokens = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct GroundingAnnotation {
  std::string response_id;
  std::vector<Span> spans;  // sorted by start, non-overlapping
  std::size_t knowledge_tokens = 0;
  std::size_t situation_tokens = 0;
  friend bool operator==(const GroundingAnnotation&, const GroundingAnnotation&) = default;
};

// Matches runs of response tokens against both lexicons. Knowledge matches
// are placed first, longest runs first and earlier runs first among equal
// lengths; situation matches then fill the remaining tokens the same way. A
// run matching both lexicons is therefore KNOWLEDGE. Token counts are the
// number of word tokens inside spans of each label.
GroundingAnnotation annotate(std::string_view response, const Lexicon& knowledge, const Lexicon& situation,
                             std::string response_id = {});

// JSON form. Spans carry byte offsets plus UTF-16 offsets (start_u16,
// end_u16) for clients that index strings by UTF-16 code units.
nlohmann::ordered_json to_json(const GroundingAnnotation& a, std::string_view response);
GroundingAnnotation annotation_from_json(const nlohmann::json& j);

// Terminal rendering: knowledge spans on cyan, situation spans on green.
std::string render_ansi(std::string_view response, const GroundingAnnotation& a);

}  // namespace kgdf::grounding
