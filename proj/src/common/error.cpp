#include "kgdf/error.hpp"

namespace kgdf {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
    case Errc::MalformedTriple: return "MalformedTriple";
    case Errc::EmptyField: return "EmptyField";
    case Errc::UnknownRelation: return "UnknownRelation";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::RangeMismatch: return "RangeMismatch";
    case Errc::UnknownEntity: return "UnknownEntity";
    case Errc::InvalidOntology: return "InvalidOntology";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::OntologyMismatch: return "OntologyMismatch";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::InvalidRule: return "InvalidRule";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::UnknownCandidate: return "UnknownCandidate";
    case Errc::AlreadyDecided: return "AlreadyDecided";
    case Errc::ValidationFailedOnAccept: return "ValidationFailedOnAccept";
    case Errc::WrongScenarioKind: return "WrongScenarioKind";
    case Errc::EmptySubgraph: return "EmptySubgraph";
    case Errc::PersonaGameMismatch: return "PersonaGameMismatch";
    case Errc::UnknownPersona: return "UnknownPersona";
    case Errc::InvalidScenario: return "InvalidScenario";
    case Errc::InvalidTemplate: return "InvalidTemplate";
    case Errc::PromptTooLong: return "PromptTooLong";
    case Errc::FixtureMissing: return "FixtureMissing";
    case Errc::EmptyCompletion: return "EmptyCompletion";
    case Errc::EmptyCandidateList: return "EmptyCandidateList";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MissingMetadata: return "MissingMetadata";
    case Errc::DuplicateTask: return "DuplicateTask";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::DuplicateRating: return "DuplicateRating";
    case Errc::ScoreOutOfRange: return "ScoreOutOfRange";
    case Errc::ScoreNotHalfStep: return "ScoreNotHalfStep";
    case Errc::NoRatings: return "NoRatings";
    case Errc::InsufficientDecoys: return "InsufficientDecoys";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::PortInUse: return "PortInUse";
    case Errc::DataDirUnwritable: return "DataDirUnwritable";
    case Errc::Unauthorized: return "Unauthorized";
    case Errc::Forbidden: return "Forbidden";
    case Errc::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace kgdf
