#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace veriq {

// The five verbal subtests. The first three are core, the last two supplemental.
enum class SubtestKind { kInformation, kVocabulary, kWordReasoning, kComprehension, kSimilarities };

inline constexpr std::array<SubtestKind, 5> kAllSubtests = {
    SubtestKind::kInformation, SubtestKind::kVocabulary, SubtestKind::kWordReasoning,
    SubtestKind::kComprehension, SubtestKind::kSimilarities};

const char* SubtestKindName(SubtestKind kind);
std::optional<SubtestKind> ParseSubtestKind(std::string_view name);

constexpr bool IsCore(SubtestKind kind) {
  return kind == SubtestKind::kInformation || kind == SubtestKind::kVocabulary ||
         kind == SubtestKind::kWordReasoning;
}

}  // namespace veriq
