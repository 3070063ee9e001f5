#include "veriq/kb/matrix_builder.hpp"

#include <algorithm>
#include <cmath>

namespace veriq::kb {

double StrengthWeighting::operator()(double strength) const {
  if (mode == WeightingMode::kIdentity) return strength;
  return std::min(std::sqrt(std::max(strength, 0.0)), cap);
}

ConceptFeatureMatrix BuildMatrix(const std::vector<Assertion>& assertions, const Vocabulary& vocabulary,
                                 const StrengthWeighting& weighting) {
  ConceptFeatureMatrix out;
  std::vector<Triplet> triplets;
  triplets.reserve(2 * assertions.size());
  for (const auto& a : assertions) {
    auto left = vocabulary.FindConcept(a.concept_left);
    auto right = vocabulary.FindConcept(a.concept_right);
    auto right_feature = vocabulary.FindFeature(Feature{Direction::kRight, a.relation, a.concept_right});
    auto left_feature = vocabulary.FindFeature(Feature{Direction::kLeft, a.relation, a.concept_left});
    if (!left || !right || !right_feature || !left_feature) {
      ++out.skipped;
      continue;
    }
    double value = a.polarity * weighting(a.strength);
    triplets.push_back({static_cast<std::uint32_t>(*left), static_cast<std::uint32_t>(*right_feature), value});
    triplets.push_back({static_cast<std::uint32_t>(*right), static_cast<std::uint32_t>(*left_feature), value});
  }
  out.matrix = FromTriplets(vocabulary.concept_count(), vocabulary.feature_count(), std::move(triplets));
  return out;
}

}  // namespace veriq::kb
