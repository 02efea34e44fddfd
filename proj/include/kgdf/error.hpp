#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgdf {

// Error codes shared by every module. The names are part of the wire
// contract: the HTTP service and the CLI report them verbatim.
enum class Errc {
  InvalidArgument,
  IoError,
  // kg
  MalformedTriple,
  EmptyField,
  UnknownRelation,
  DomainMismatch,
  RangeMismatch,
  UnknownEntity,
  InvalidOntology,
  CorruptFile,
  OntologyMismatch,
  // ingest
  EmptyDocument,
  InvalidRule,
  BackendUnavailable,
  UnknownCandidate,
  AlreadyDecided,
  ValidationFailedOnAccept,
  // prompt
  WrongScenarioKind,
  EmptySubgraph,
  PersonaGameMismatch,
  UnknownPersona,
  InvalidScenario,
  InvalidTemplate,
  PromptTooLong,
  // gen
  FixtureMissing,
  EmptyCompletion,
  EmptyCandidateList,
  IndexOutOfRange,
  // eval
  MissingMetadata,
  DuplicateTask,
  SizeMismatch,
  UnknownTask,
  DuplicateRating,
  ScoreOutOfRange,
  ScoreNotHalfStep,
  NoRatings,
  InsufficientDecoys,
  // gateway
  InvalidConfig,
  PortInUse,
  DataDirUnwritable,
  Unauthorized,
  Forbidden,
  NotFound,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace kgdf
