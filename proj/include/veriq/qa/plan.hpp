#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "veriq/kb/vocabulary.hpp"
#include "veriq/spectral/query.hpp"
#include "veriq/subtest.hpp"

namespace veriq::qa {

using veriq::SubtestKind;

enum class RemovalReason { kQuestionWord, kPhraseTrigger, kStopConcept, kSubsumed, kUnknown };
const char* RemovalReasonName(RemovalReason reason);

enum class SpecialFilter { kNone, kColor, kNumber };
const char* SpecialFilterName(SpecialFilter filter);

struct RemovedConcept {
  std::string name;
  RemovalReason reason;
  bool operator==(const RemovedConcept&) const = default;
};

// Parsed question: what goes to the spectral model and what was dropped.
struct QuestionPlan {
  SubtestKind kind = SubtestKind::kInformation;
  spectral::Category retained;
  std::vector<RemovedConcept> removed;
  spectral::RelationSet allowed;  // empty = unrestricted
  SpecialFilter special = SpecialFilter::kNone;

  std::vector<std::string> retained_names() const;
};

struct Extraction {
  spectral::Category category;
  std::vector<RemovedConcept> removed;
};

// Matches adjacent token pairs, then single tokens, against the vocabulary.
// Concepts are listed in order of first appearance, bigrams before the
// unigrams they start with. With drop_subsumed, a unigram that is part of a
// matched bigram moves to removed(subsumed). Tokens covered by no match go to
// removed(unknown). An empty token is a boundary no bigram may cross.
// Throws kNoConcepts when nothing is retained.
Extraction ExtractConcepts(const std::vector<std::string>& tokens, const kb::Vocabulary& vocabulary,
                           bool drop_subsumed);

struct RoutingConfig {
  spectral::RelationSet why_relations{"Causes",       "Desires",         "UsedFor",    "HasPrerequisite",
                                      "CausesDesire", "MotivatedByGoal", "HasSubevent"};
  spectral::RelationSet where_relations{"AtLocation", "NearLocation"};
  // Not enumerated by the source method; a documented, configurable choice.
  spectral::RelationSet what_relations{"IsA",        "HasA",    "HasProperty",    "UsedFor", "CapableOf",
                                       "DefinedAs",  "MadeOf",  "PartOf",         "ReceivesAction",
                                       "HasSubevent", "Causes", "CreatedBy",      "SymbolOf"};
};

// Result of routing before any vocabulary lookup. `strip` holds the tokens
// the plan removes; the caller drops them before extracting concepts.
struct Route {
  QuestionPlan plan;
  std::set<std::string> strip;
};

// Applies, in priority order: what-color / what-is-the-color-of, how many,
// leading why, leading where, leading what; then the phrase triggers
// use/used -> {UsedFor} and made of / make from / made out of -> {MadeOf},
// which override the relation set. Question and trigger words are removed.
Route RouteQuestion(std::string_view text, const std::vector<std::string>& tokens,
                    const RoutingConfig& config = {});

}  // namespace veriq::qa
