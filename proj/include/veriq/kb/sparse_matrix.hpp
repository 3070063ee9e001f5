#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace veriq::kb {

// Compressed sparse row storage. Column indices within a row are strictly
// increasing.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> row_ptr{0};
  std::vector<std::uint32_t> col_index;
  std::vector<double> values;

  std::size_t nonzeros() const { return values.size(); }

  std::span<const std::uint32_t> row_columns(std::size_t row) const {
    return {col_index.data() + row_ptr[row], col_index.data() + row_ptr[row + 1]};
  }
  std::span<const double> row_values(std::size_t row) const {
    return {values.data() + row_ptr[row], values.data() + row_ptr[row + 1]};
  }

  // Value at (row, col), zero when not stored.
  double at(std::size_t row, std::size_t col) const;

  CsrMatrix Transposed() const;

  bool operator==(const CsrMatrix&) const = default;
};

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

// Duplicate (row, col) entries are summed. Cells that sum to exactly zero
// are kept so that every contributing assertion leaves a stored entry.
CsrMatrix FromTriplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

}  // namespace veriq::kb
