#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skiprec/matrix.hpp"

namespace skiprec {

struct SparseEntry {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted and unique within
/// each row, values are finite and never explicitly zero.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Builds from unordered entries. Duplicate coordinates, out-of-range
  /// indices and non-finite values are rejected; zero values are dropped.
  static SparseMatrix from_entries(std::size_t rows, std::size_t cols,
                                   std::vector<SparseEntry> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t r) const noexcept {
    return {cols_idx_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  std::span<const double> row_values(std::size_t r) const noexcept {
    return {values_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  std::size_t row_nnz(std::size_t r) const noexcept { return offsets_[r + 1] - offsets_[r]; }

  /// Value at (r, c), zero when not stored.
  double at(std::size_t r, std::size_t c) const noexcept;

  SparseMatrix transpose() const;
  Matrix to_dense() const;
  std::vector<SparseEntry> entries() const;

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> cols_idx_;
  std::vector<double> values_;
};

/// out = S * M. Rows are accumulated in stored column order.
Matrix spmm(const SparseMatrix& s, const Matrix& m);

/// out = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
/// out = A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// out = A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

}  // namespace skiprec
