#include "veriq/spectral/svd.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace veriq::spectral {

namespace {

// Thin orthonormal basis of the column space of `block` (rows >= cols).
RowMatrix Orthonormalize(const RowMatrix& block) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(block.rows(), block.cols());
  return q;
}

}  // namespace

SpectralModel SpectralModel::Truncated(std::size_t k) const {
  k = std::min(k, rank());
  const auto kk = static_cast<Eigen::Index>(k);
  SpectralModel out;
  out.u = u.leftCols(kk);
  out.s = s.head(kk);
  out.v = v.leftCols(kk);
  out.seed = seed;
  out.tolerance = tolerance;
  out.iterations = iterations;
  return out;
}

SpectralModel TruncatedSvd(const kb::CsrMatrix& matrix, const SvdOptions& options) {
  const std::size_t m = matrix.rows;
  const std::size_t n = matrix.cols;
  if (m == 0 || n == 0) throw Error(ErrorCode::kInvalidArgument, "truncated_svd: empty matrix");
  const std::size_t min_dim = std::min(m, n);
  if (options.k < 1 || options.k > min_dim) {
    std::ostringstream msg;
    msg << "truncated_svd: k=" << options.k << " outside [1, " << min_dim << "]";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  const std::size_t extra = options.oversample ? options.oversample : std::max<std::size_t>(10, options.k / 5);
  const auto k = static_cast<Eigen::Index>(options.k);
  const auto b = static_cast<Eigen::Index>(std::min(min_dim, options.k + extra));

  const kb::CsrMatrix transposed = matrix.Transposed();

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gaussian(0.0, 1.0);
  RowMatrix omega(static_cast<Eigen::Index>(n), b);
  for (Eigen::Index i = 0; i < omega.size(); ++i) omega.data()[i] = gaussian(rng);

  RowMatrix y;
  kernels::SparseTimesDense(matrix, omega, y);
  RowMatrix q = Orthonormalize(y);
  RowMatrix w;

  double worst = 0.0;
  for (std::size_t iteration = 1; iteration <= options.max_iterations; ++iteration) {
    kernels::SparseTimesDense(transposed, q, w);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
    Eigen::MatrixXd qw = qr.householderQ() * Eigen::MatrixXd::Identity(w.rows(), b);
    Eigen::MatrixXd rw = qr.matrixQR().topLeftCorner(b, b).triangularView<Eigen::Upper>();

    // Q^T A = W^T = Rw^T Qw^T, so the Ritz triplets come from the small SVD of Rw^T.
    Eigen::JacobiSVD<Eigen::MatrixXd> small(rw.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = small.singularValues();

    RowMatrix qw_rows = qw;
    kernels::SparseTimesDense(matrix, qw_rows, y);

    Eigen::MatrixXd left = q * small.matrixU().leftCols(k);
    Eigen::MatrixXd right = qw * small.matrixV().leftCols(k);
    Eigen::MatrixXd residual = y * small.matrixV().leftCols(k) - left * sigma.head(k).asDiagonal();

    worst = residual.colwise().norm().maxCoeff();
    if (worst <= options.tolerance * sigma[0]) {
      SpectralModel model;
      model.u = left;
      model.s = sigma.head(k);
      model.v = right;
      model.seed = options.seed;
      model.tolerance = options.tolerance;
      model.iterations = iteration;
      for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::Index pivot = 0;
        model.u.col(i).cwiseAbs().maxCoeff(&pivot);
        if (model.u(pivot, i) < 0.0) {
          model.u.col(i) *= -1.0;
          model.v.col(i) *= -1.0;
        }
      }
      return model;
    }
    q = Orthonormalize(y);
  }

  std::ostringstream msg;
  msg << "truncated_svd did not converge after " << options.max_iterations
      << " iterations (worst residual " << worst << ")";
  throw SolverError(msg.str(), options.max_iterations);
}

std::size_t NumericalRank(const SpectralModel& model, double relative_tolerance) {
  if (model.rank() == 0 || model.s[0] == 0.0) return 0;
  std::size_t r = 0;
  while (r < model.rank() && model.s[static_cast<Eigen::Index>(r)] > relative_tolerance * model.s[0]) ++r;
  return r;
}

}  // namespace veriq::spectral
