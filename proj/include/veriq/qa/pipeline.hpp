#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "veriq/qa/plan.hpp"
#include "veriq/qa/text.hpp"
#include "veriq/spectral/query.hpp"

namespace veriq::qa {

struct PipelineConfig {
  TextOptions text;
  RoutingConfig routing;
  bool drop_subsumed = true;

  std::vector<std::string> color_reference{"black",  "white", "red",    "orange", "yellow",
                                           "green",  "blue",  "indigo", "violet"};
  std::vector<std::string> number_reference{"one",     "two",      "three",    "four",    "five",
                                            "six",     "seven",    "eight",    "nine",    "ten",
                                            "eleven",  "twelve",   "thirteen", "fourteen", "fifteen",
                                            "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
  // Fraction of the weakest reference score a candidate must reach.
  double reference_fraction = 0.95;
  std::set<std::string> answer_exclusions{"color", "number", "person", "yourself",
                                          "many",  "part",   "organ",  "much"};

  spectral::RelationSet vocabulary_relations{"IsA",       "HasA",      "HasProperty",     "UsedFor",
                                             "CapableOf", "DefinedAs", "MotivatedByGoal", "Causes"};
  std::set<std::string> word_reasoning_stop_concepts{"person", "get",   "need", "make", "out", "up",
                                                     "often",  "look",  "not",  "keep", "see", "come"};

  std::size_t similarity_neighbors = 2;
  std::size_t similarity_features = 100;
};

struct Answer {
  QuestionPlan plan;
  spectral::AnswerList answers;
};

// Keeps candidates whose concept c scores (c, IsA, color|number) at or above
// reference_fraction of the lowest-scoring reference concept, after dropping
// the excluded concepts. Throws kConfig when no reference concept is known.
std::vector<spectral::ScoredFeature> FilterColorNumber(const std::vector<spectral::ScoredFeature>& candidates,
                                                       SpecialFilter kind, const spectral::KnowledgeModel& model,
                                                       const PipelineConfig& config);

// Information and Comprehension: normalize, route, extract, predict, filter.
Answer AnswerOpenQuestion(std::string_view text, const spectral::KnowledgeModel& model,
                          const PipelineConfig& config = {}, SubtestKind kind = SubtestKind::kInformation);

Answer AnswerVocabulary(std::string_view word, const spectral::KnowledgeModel& model,
                        const PipelineConfig& config = {});

// Clues seen so far for one Word Reasoning item.
class ClueState {
 public:
  ClueState() = default;
  explicit ClueState(std::vector<std::string> clues);

  // Throws kInvalidArgument beyond three clues.
  void Add(std::string clue);
  const std::vector<std::string>& clues() const { return clues_; }

  // Concepts extracted clue by clue and accumulated, stop-concepts removed.
  QuestionPlan Plan(const kb::Vocabulary& vocabulary, const PipelineConfig& config = {}) const;

 private:
  std::vector<std::string> clues_;
};

// Top five distinct answer concepts, each carried by its best-scoring feature.
Answer AnswerWordReasoning(const ClueState& clues, const spectral::KnowledgeModel& model,
                           const PipelineConfig& config = {});

// Each word's concept and its nearest neighbors each contribute their top
// predicted features; each word's lists merge by max score, the two sets are
// intersected, and shared features are scored by the sum of both set scores.
Answer AnswerSimilarities(std::string_view word_a, std::string_view word_b, const spectral::KnowledgeModel& model,
                          const PipelineConfig& config = {});

}  // namespace veriq::qa
