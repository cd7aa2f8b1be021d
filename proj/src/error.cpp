#include "biblio/error.hpp"

namespace biblio {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Config: return "Config";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::EmptyReferences: return "EmptyReferences";
    case ErrorCode::EmptyStage: return "EmptyStage";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace biblio
