#pragma once

#include <cstddef>
#include <cstdint>

#include "veriq/kb/sparse_matrix.hpp"
#include "veriq/spectral/model.hpp"

namespace veriq::spectral {

struct SvdOptions {
  std::size_t k = 500;
  std::uint64_t seed = 20120301;
  // Converged when ||A v_i - s_i u_i|| <= tolerance * s_1 for every i < k.
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000;
  // Extra block columns beyond k; 0 selects max(10, k / 5).
  std::size_t oversample = 0;
};

// Truncated SVD by block subspace iteration with Rayleigh-Ritz extraction.
// Deterministic for a fixed seed. Each singular vector pair is sign-fixed so
// that the largest-magnitude entry of u_i is positive.
//
// Throws kInvalidArgument when the matrix is empty or k is outside
// [1, min(rows, cols)], and SolverError when the residuals do not reach the
// tolerance within max_iterations.
SpectralModel TruncatedSvd(const kb::CsrMatrix& matrix, const SvdOptions& options);

// Number of leading singular values above relative_tolerance * s_1.
std::size_t NumericalRank(const SpectralModel& model, double relative_tolerance = 1e-9);

}  // namespace veriq::spectral
