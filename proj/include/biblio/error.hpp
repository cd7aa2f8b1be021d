#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace biblio {

enum class ErrorCode {
  Io,
  Parse,
  Config,
  InvalidArgument,
  EmptyCorpus,
  DuplicateId,
  EmptyVocabulary,
  DegenerateProjection,
  EmptyReferences,
  EmptyStage,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the pipeline in particular) can tell fatal corpus problems from
/// per-analysis ones.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace biblio
