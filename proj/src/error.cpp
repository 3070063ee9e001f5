#include "veriq/error.hpp"

namespace veriq {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kFormat:
      return "format";
    case ErrorCode::kEmptyKnowledgeBase:
      return "empty_knowledge_base";
    case ErrorCode::kUnknownConcepts:
      return "unknown_concepts";
    case ErrorCode::kNoConcepts:
      return "no_concepts";
    case ErrorCode::kSolver:
      return "solver";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kConflict:
      return "conflict";
  }
  return "unknown";
}

}  // namespace veriq
