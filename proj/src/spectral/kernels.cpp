#include "veriq/spectral/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace veriq::spectral::kernels {

namespace {

inline void AccumulateRow(const kb::CsrMatrix& a, const RowMatrix& x, std::size_t row, double* dst) {
  const auto b = x.cols();
  for (Eigen::Index t = 0; t < b; ++t) dst[t] = 0.0;
  for (auto k = a.row_ptr[row]; k < a.row_ptr[row + 1]; ++k) {
    const double v = a.values[k];
    const double* src = x.data() + static_cast<std::size_t>(a.col_index[k]) * b;
    for (Eigen::Index t = 0; t < b; ++t) dst[t] += v * src[t];
  }
}

inline double Dot(const double* a, const double* b, Eigen::Index n) {
  double s = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) s += a[t] * b[t];
  return s;
}

inline double ScaledNorm(const double* row, const Eigen::VectorXd& scale) {
  double s = 0.0;
  for (Eigen::Index t = 0; t < scale.size(); ++t) {
    const double v = row[t] * scale[t];
    s += v * v;
  }
  return std::sqrt(s);
}

inline double ScaledDot(const double* a, const double* b, const Eigen::VectorXd& scale) {
  double s = 0.0;
  for (Eigen::Index t = 0; t < scale.size(); ++t) s += a[t] * b[t] * scale[t] * scale[t];
  return s;
}

}  // namespace

void SparseTimesDense(const kb::CsrMatrix& a, const RowMatrix& x, RowMatrix& y) {
  y.resize(static_cast<Eigen::Index>(a.rows), x.cols());
  const auto rows = static_cast<std::int64_t>(a.rows);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < rows; ++r) {
    AccumulateRow(a, x, static_cast<std::size_t>(r), y.data() + r * x.cols());
  }
}

void RowDots(const RowMatrix& factors, const Eigen::VectorXd& weights, std::size_t first, std::size_t last,
             std::span<double> out) {
  const auto k = factors.cols();
  const auto lo = static_cast<std::int64_t>(first);
  const auto hi = static_cast<std::int64_t>(last);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = lo; j < hi; ++j) {
    out[static_cast<std::size_t>(j)] = Dot(factors.data() + j * k, weights.data(), k);
  }
}

void ScaledRowCosines(const RowMatrix& factors, const Eigen::VectorXd& scale, std::size_t anchor,
                      std::span<double> out) {
  const auto k = factors.cols();
  const double* anchor_row = factors.data() + static_cast<std::int64_t>(anchor) * k;
  const double anchor_norm = ScaledNorm(anchor_row, scale);
  const auto rows = static_cast<std::int64_t>(factors.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t d = 0; d < rows; ++d) {
    const double* row = factors.data() + d * k;
    const double norm = ScaledNorm(row, scale);
    out[static_cast<std::size_t>(d)] =
        (norm == 0.0 || anchor_norm == 0.0) ? 0.0 : ScaledDot(anchor_row, row, scale) / (norm * anchor_norm);
  }
}

namespace reference {

void SparseTimesDense(const kb::CsrMatrix& a, const RowMatrix& x, RowMatrix& y) {
  y.resize(static_cast<Eigen::Index>(a.rows), x.cols());
  for (std::size_t r = 0; r < a.rows; ++r) {
    AccumulateRow(a, x, r, y.data() + static_cast<Eigen::Index>(r) * x.cols());
  }
}

void RowDots(const RowMatrix& factors, const Eigen::VectorXd& weights, std::size_t first, std::size_t last,
             std::span<double> out) {
  for (std::size_t j = first; j < last; ++j) {
    out[j] = Dot(factors.data() + static_cast<Eigen::Index>(j) * factors.cols(), weights.data(), factors.cols());
  }
}

void ScaledRowCosines(const RowMatrix& factors, const Eigen::VectorXd& scale, std::size_t anchor,
                      std::span<double> out) {
  const auto k = factors.cols();
  const double* anchor_row = factors.data() + static_cast<Eigen::Index>(anchor) * k;
  const double anchor_norm = ScaledNorm(anchor_row, scale);
  for (Eigen::Index d = 0; d < factors.rows(); ++d) {
    const double* row = factors.data() + d * k;
    const double norm = ScaledNorm(row, scale);
    out[static_cast<std::size_t>(d)] =
        (norm == 0.0 || anchor_norm == 0.0) ? 0.0 : ScaledDot(anchor_row, row, scale) / (norm * anchor_norm);
  }
}

}  // namespace reference
}  // namespace veriq::spectral::kernels
