#pragma once

#include <stdexcept>
#include <string>

namespace veriq {

// Error categories map onto CLI exit codes and HTTP status codes in the harness.
enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kIo,
  kFormat,
  kEmptyKnowledgeBase,
  kUnknownConcepts,
  kNoConcepts,
  kSolver,
  kConfig,
  kConflict,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* ErrorCodeName(ErrorCode code);

}  // namespace veriq
