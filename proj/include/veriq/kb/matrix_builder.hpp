#pragma once

#include <cstddef>
#include <vector>

#include "veriq/kb/assertion.hpp"
#include "veriq/kb/sparse_matrix.hpp"
#include "veriq/kb/vocabulary.hpp"

namespace veriq::kb {

enum class WeightingMode { kSqrtCapped, kIdentity };

struct StrengthWeighting {
  WeightingMode mode = WeightingMode::kSqrtCapped;
  double cap = 10.0;

  // sqrt(max(s, 0)) capped at `cap`, or s itself in identity mode.
  double operator()(double strength) const;
};

struct ConceptFeatureMatrix {
  CsrMatrix matrix;             // rows = concepts, cols = features
  std::size_t skipped = 0;      // assertions whose concepts or features were not indexed
};

// Each assertion (c, r, d, s, p) adds p*w(s) at [c, (right, r, d)] and at
// [d, (left, r, c)]. Contributions to the same cell are summed.
ConceptFeatureMatrix BuildMatrix(const std::vector<Assertion>& assertions, const Vocabulary& vocabulary,
                                 const StrengthWeighting& weighting = {});

}  // namespace veriq::kb
