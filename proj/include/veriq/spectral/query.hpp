#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "veriq/kb/vocabulary.hpp"
#include "veriq/spectral/model.hpp"

namespace veriq::spectral {

using RelationSet = std::set<std::string>;

struct WeightedConcept {
  std::string name;
  double weight = 1.0;
};

// A weighted concept set that is projected through the spectral model.
using Category = std::vector<WeightedConcept>;

struct ScoredFeature {
  std::size_t index = 0;  // column in the vocabulary
  kb::Feature feature;
  double score = 0.0;
};

inline constexpr std::size_t kAnswerListSize = 5;
inline constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

// Ranked answers: descending score, ties broken by (relation, concept, direction).
using AnswerList = std::vector<ScoredFeature>;

struct ScoredConcept {
  std::size_t index = 0;
  std::string name;
  double similarity = 0.0;
};

// Scores every feature j as V_j . diag(S) . U^T c, where c is the
// L2-normalized category vector over concept rows, keeps features whose
// relation is in `allowed` (all when empty) and returns the best `limit`.
// Scores within 1e-10 * |diag(S) U^T c| of zero are reported as exactly 0.
// Category concepts missing from the vocabulary are ignored; when none is
// found the call throws kUnknownConcepts naming them.
std::vector<ScoredFeature> PredictFeatures(const KnowledgeModel& model, const Category& category,
                                           const RelationSet& allowed = {}, std::size_t limit = kAnswerListSize);

// Top `count` concepts by cosine similarity in the reduced concept space
// U * diag(S), excluding `concept_name` itself. Similarities are rounded to
// multiples of 1e-10 so that rounding noise cannot reorder equal cosines.
std::vector<ScoredConcept> ConceptNeighbors(const KnowledgeModel& model, const std::string& concept_name,
                                            std::size_t count);

// Reconstructed cell U_c . diag(S) . V_f. A feature that never occurs in the
// knowledge base has an all-zero column, so its score is 0.
double FeatureScore(const KnowledgeModel& model, const std::string& concept_name, const kb::Feature& feature);

}  // namespace veriq::spectral
