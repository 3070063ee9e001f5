#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "veriq/kb/sparse_matrix.hpp"

namespace veriq::spectral {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Hot loops of the solver and the query path. Each kernel computes every
// output element with a fixed summation order, so the OpenMP versions are
// bit-identical to the serial reference versions in kernels::reference.
namespace kernels {

// y = a * x, with x of shape (a.cols x b) and y resized to (a.rows x b).
void SparseTimesDense(const kb::CsrMatrix& a, const RowMatrix& x, RowMatrix& y);

// out[j] = dot(factors.row(j), weights) for j in [first, last).
void RowDots(const RowMatrix& factors, const Eigen::VectorXd& weights, std::size_t first, std::size_t last,
             std::span<double> out);

// Cosine similarity between row `anchor` and every row of (factors * diag(scale)).
// Rows with zero norm get similarity 0.
void ScaledRowCosines(const RowMatrix& factors, const Eigen::VectorXd& scale, std::size_t anchor,
                      std::span<double> out);

namespace reference {

void SparseTimesDense(const kb::CsrMatrix& a, const RowMatrix& x, RowMatrix& y);
void RowDots(const RowMatrix& factors, const Eigen::VectorXd& weights, std::size_t first, std::size_t last,
             std::span<double> out);
void ScaledRowCosines(const RowMatrix& factors, const Eigen::VectorXd& scale, std::size_t anchor,
                      std::span<double> out);

}  // namespace reference
}  // namespace kernels
}  // namespace veriq::spectral
