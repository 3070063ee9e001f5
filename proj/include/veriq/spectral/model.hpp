#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "veriq/error.hpp"
#include "veriq/kb/sparse_matrix.hpp"
#include "veriq/kb/vocabulary.hpp"
#include "veriq/spectral/kernels.hpp"

namespace veriq::spectral {

// Truncated SVD factors: matrix ~= U * diag(S) * V^T.
struct SpectralModel {
  RowMatrix u;          // n_concepts x k
  Eigen::VectorXd s;    // k, descending, non-negative
  RowMatrix v;          // n_features x k
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::size_t iterations = 0;

  std::size_t rank() const { return static_cast<std::size_t>(s.size()); }

  // Keeps the leading `k` triplets.
  SpectralModel Truncated(std::size_t k) const;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& message, std::size_t iterations)
      : Error(ErrorCode::kSolver, message), iterations_(iterations) {}
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

// Everything a query needs: the indexed vocabulary, the raw signed matrix,
// and its spectral factors. Immutable once built.
struct KnowledgeModel {
  kb::Vocabulary vocabulary;
  kb::CsrMatrix matrix;
  SpectralModel spectral;
};

// Versioned, checksummed binary container. Layout (little-endian):
//   "VERIQKB\0" | u32 version | u32 flags | u64 payload bytes | u32 crc32 | payload
// The payload holds the vocabulary block, the CSR matrix block and, when
// flag bit 0 is set, the spectral block (k, seed, tolerance, iterations, S, U, V).
inline constexpr std::uint32_t kContainerVersion = 1;

void SaveModel(const KnowledgeModel& model, const std::string& path);
KnowledgeModel LoadModel(const std::string& path);

// crc32 of the payload of a saved container; identifies a model build.
std::uint32_t ModelChecksum(const KnowledgeModel& model);

}  // namespace veriq::spectral
