#include "veriq/kb/sparse_matrix.hpp"

#include <algorithm>

namespace veriq::kb {

double CsrMatrix::at(std::size_t row, std::size_t col) const {
  auto cols_in_row = row_columns(row);
  auto it = std::lower_bound(cols_in_row.begin(), cols_in_row.end(), static_cast<std::uint32_t>(col));
  if (it == cols_in_row.end() || *it != col) return 0.0;
  return values[row_ptr[row] + static_cast<std::size_t>(it - cols_in_row.begin())];
}

CsrMatrix CsrMatrix::Transposed() const {
  CsrMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(cols + 1, 0);
  for (auto c : col_index) ++t.row_ptr[c + 1];
  for (std::size_t i = 0; i < cols; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col_index.resize(nonzeros());
  t.values.resize(nonzeros());
  std::vector<std::uint64_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      auto dst = next[col_index[k]]++;
      t.col_index[dst] = static_cast<std::uint32_t>(r);
      t.values[dst] = values[k];
    }
  }
  return t;
}

CsrMatrix FromTriplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    auto j = i;
    double sum = 0.0;
    while (j < triplets.size() && triplets[j].row == triplets[i].row && triplets[j].col == triplets[i].col) {
      sum += triplets[j].value;
      ++j;
    }
    m.col_index.push_back(triplets[i].col);
    m.values.push_back(sum);
    ++m.row_ptr[triplets[i].row + 1];
    i = j;
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

}  // namespace veriq::kb
