// Parallel kernels against their serial reference versions on a synthetic
// matrix shaped like a pruned commonsense dump (very sparse, skewed rows).

#include <map>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "veriq/kb/sparse_matrix.hpp"
#include "veriq/spectral/kernels.hpp"

namespace {

using veriq::kb::CsrMatrix;
using veriq::kb::Triplet;
using veriq::spectral::RowMatrix;
namespace kernels = veriq::spectral::kernels;

constexpr std::size_t kRows = 20000;
constexpr std::size_t kCols = 60000;
constexpr std::size_t kRank = 100;

const CsrMatrix& Matrix() {
  static const CsrMatrix m = [] {
    std::mt19937_64 rng(7);
    std::geometric_distribution<int> degree(0.08);
    std::uniform_int_distribution<std::uint32_t> col(0, kCols - 1);
    std::normal_distribution<double> value;
    std::vector<Triplet> triplets;
    for (std::uint32_t r = 0; r < kRows; ++r) {
      const int d = 2 + degree(rng);
      for (int i = 0; i < d; ++i) triplets.push_back({r, col(rng), value(rng)});
    }
    return veriq::kb::FromTriplets(kRows, kCols, std::move(triplets));
  }();
  return m;
}

const RowMatrix& Dense(std::size_t rows) {
  static std::map<std::size_t, RowMatrix> cache;
  auto it = cache.find(rows);
  if (it == cache.end()) it = cache.emplace(rows, RowMatrix::Random(rows, kRank)).first;
  return it->second;
}

template <auto Kernel>
void BM_SparseTimesDense(benchmark::State& state) {
  const auto& a = Matrix();
  const auto& x = Dense(kCols);
  RowMatrix y;
  for (auto _ : state) {
    Kernel(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.nonzeros() * kRank));
}

template <auto Kernel>
void BM_RowDots(benchmark::State& state) {
  const auto& v = Dense(kCols);
  const Eigen::VectorXd w = Eigen::VectorXd::Random(kRank);
  std::vector<double> out(kCols);
  for (auto _ : state) {
    Kernel(v, w, 0, kCols, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(kCols));
}

template <auto Kernel>
void BM_ScaledRowCosines(benchmark::State& state) {
  const auto& u = Dense(kRows);
  const Eigen::VectorXd s = Eigen::VectorXd::Random(kRank).cwiseAbs();
  std::vector<double> out(kRows);
  for (auto _ : state) {
    Kernel(u, s, 17, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(kRows));
}

BENCHMARK(BM_SparseTimesDense<kernels::reference::SparseTimesDense>)->Name("SparseTimesDense/serial")->UseRealTime();
BENCHMARK(BM_SparseTimesDense<kernels::SparseTimesDense>)->Name("SparseTimesDense/openmp")->UseRealTime();
BENCHMARK(BM_RowDots<kernels::reference::RowDots>)->Name("RowDots/serial")->UseRealTime();
BENCHMARK(BM_RowDots<kernels::RowDots>)->Name("RowDots/openmp")->UseRealTime();
BENCHMARK(BM_ScaledRowCosines<kernels::reference::ScaledRowCosines>)->Name("ScaledRowCosines/serial")->UseRealTime();
BENCHMARK(BM_ScaledRowCosines<kernels::ScaledRowCosines>)->Name("ScaledRowCosines/openmp")->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
