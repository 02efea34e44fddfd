#pragma once

#include <cstddef>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgdf/gen/backend.hpp"
#include "kgdf/ingest/profile.hpp"
#include "kgdf/kg/ontology.hpp"
#include "kgdf/kg/triple.hpp"

namespace kgdf::ingest {

enum class Extractor { Pattern, Llm };
enum class CandidateStatus { Pending, Accepted, Rejected };

std::string_view to_string(Extractor e) noexcept;
std::string_view to_string(CandidateStatus s) noexcept;
Extractor extractor_from_string(std::string_view text);
CandidateStatus status_from_string(std::string_view text);

struct CandidateTriple {
  std::string id;  // assigned by the curation queue
  kg::Triple triple;
  Extractor extractor = Extractor::Pattern;
  CandidateStatus status = CandidateStatus::Pending;
  std::string note;
};

// One extraction rule. Regex rules emit their single capture group as the
// object; keyword-list rules emit one object per item of the comma / "and"
// separated list that follows the keyword on the same line.
struct PatternRule {
  enum class Kind { Regex, KeywordList };
  Kind kind = Kind::Regex;
  std::string relation;
  std::string pattern;
  std::regex compiled;
};

// Rule file syntax, one rule per line, '#' comments:
//   version <tag>
//   regex <relation> <ECMAScript pattern with exactly one capture group>
//   list <relation> <keyword>
class RuleSet {
 public:
  // Throws InvalidRule naming the offending line.
  static RuleSet parse(std::string_view text);
  static RuleSet load(const std::filesystem::path& path);

  const std::vector<PatternRule>& rules() const noexcept { return rules_; }
  const std::string& version() const noexcept { return version_; }

 private:
  std::vector<PatternRule> rules_;
  std::string version_ = "rules-unversioned";
};

// Candidates in rule order, then match order through the sections. Every
// candidate has the profile's entity as subject and starts pending. Pure:
// identical inputs give identical lists.
std::vector<CandidateTriple> extract_triples_pattern(const EntityProfile& profile, const RuleSet& rules);

inline constexpr std::string_view kExtractionTemplateVersion = "extract-v1";

// The prompt sent for LLM extraction: instruction, the ontology's relation
// list and the profile text. Deterministic for given inputs.
std::string render_extraction_prompt(const EntityProfile& profile, const kg::Ontology& ontology);

struct ExtractionReport {
  std::size_t lines = 0;   // non-blank lines returned by the backend
  std::size_t parsed = 0;  // lines that parsed as triples
  std::vector<std::string> malformed;

  bool all_lines_malformed() const noexcept { return lines > 0 && parsed == 0; }
};

struct LlmExtraction {
  std::vector<CandidateTriple> candidates;
  ExtractionReport report;
};

// Sends the extraction prompt (slot 0) and keeps every returned line that
// parses as a triple. Malformed lines are counted in the report, never
// fatal. Backend errors (BackendUnavailable, FixtureMissing) propagate.
LlmExtraction extract_triples_llm(const EntityProfile& profile, const kg::Ontology& ontology, gen::Backend& backend);

// Runs extract_triples_llm over many profiles on a bounded worker pool.
// Results keep the input order.
std::vector<LlmExtraction> extract_triples_llm_batch(std::span<const EntityProfile> profiles,
                                                     const kg::Ontology& ontology, gen::Backend& backend,
                                                     std::size_t workers);

}  // namespace kgdf::ingest
