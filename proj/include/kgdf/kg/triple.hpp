#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace kgdf::kg {

enum class ProvenanceKind { PatternExtracted, LlmExtracted, Manual };

std::string_view to_string(ProvenanceKind kind) noexcept;
ProvenanceKind provenance_kind_from_string(std::string_view text);

// Where a triple came from. `tool` records the extractor or template
// version that produced it (empty for manual entry).
struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Manual;
  std::string source;
  std::string tool;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// A subject-predicate-object fact. Fields are stored trimmed and with their
// original case. Identity compares subject and predicate case-insensitively
// and the object exactly; provenance never takes part in identity.
class Triple {
 public:
  // Throws EmptyField for a blank component and MalformedTriple when the
  // subject or predicate holds a comma or any field holds a control
  // character (either would break the one-line text form).
  Triple(std::string_view subject, std::string_view predicate, std::string_view object,
         Provenance provenance = {});

  const std::string& subject() const noexcept { return subject_; }
  const std::string& predicate() const noexcept { return predicate_; }
  const std::string& object() const noexcept { return object_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

  // Normalized identity key; equal keys <=> equal triples.
  std::string key() const;

  friend bool operator==(const Triple& a, const Triple& b);

 private:
  std::string subject_;
  std::string predicate_;
  std::string object_;
  Provenance provenance_;
};

struct TripleKeyHash {
  std::size_t operator()(const Triple& t) const;
};

// Parses `(subject, predicate, object)`. The first two commas delimit the
// fields; the object is everything after the second comma up to the closing
// parenthesis, so it may itself contain commas and parentheses.
Triple parse_triple(std::string_view line, Provenance provenance = {});

std::string serialize_triple(const Triple& t);

}  // namespace kgdf::kg
