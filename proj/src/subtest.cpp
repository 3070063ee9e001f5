#include "veriq/subtest.hpp"

namespace veriq {

const char* SubtestKindName(SubtestKind kind) {
  switch (kind) {
    case SubtestKind::kInformation:
      return "information";
    case SubtestKind::kVocabulary:
      return "vocabulary";
    case SubtestKind::kWordReasoning:
      return "word_reasoning";
    case SubtestKind::kComprehension:
      return "comprehension";
    case SubtestKind::kSimilarities:
      return "similarities";
  }
  return "information";
}

std::optional<SubtestKind> ParseSubtestKind(std::string_view name) {
  for (auto kind : kAllSubtests) {
    if (name == SubtestKindName(kind)) return kind;
  }
  return std::nullopt;
}

}  // namespace veriq
