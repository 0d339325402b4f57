#include "skiprec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skiprec/error.hpp"
#include "skiprec/kernels.hpp"

namespace skiprec {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_entries(std::size_t rows, std::size_t cols,
                                        std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix out(rows, cols);
  out.cols_idx_.reserve(entries.size());
  out.values_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.row >= rows || e.col >= cols) {
      throw DataError("sparse entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                      ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (i > 0 && entries[i - 1].row == e.row && entries[i - 1].col == e.col) {
      throw DataError("duplicate sparse entry (" + std::to_string(e.row) + "," +
                      std::to_string(e.col) + ")");
    }
    if (!std::isfinite(e.value)) throw NumericalError("non-finite sparse value");
    if (e.value == 0.0) continue;
    out.cols_idx_.push_back(e.col);
    out.values_.push_back(e.value);
    ++out.offsets_[e.row + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) out.offsets_[r + 1] += out.offsets_[r];
  return out;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const noexcept {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(c));
  if (it == cols.end() || *it != c) return 0.0;
  return values_[offsets_[r] + static_cast<std::size_t>(it - cols.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix out(cols_, rows_);
  out.cols_idx_.resize(nnz());
  out.values_.resize(nnz());
  for (auto c : cols_idx_) ++out.offsets_[c + 1];
  for (std::size_t r = 0; r < cols_; ++r) out.offsets_[r + 1] += out.offsets_[r];
  std::vector<std::size_t> cursor(out.offsets_.begin(), out.offsets_.end() - 1);
  // Walking source rows in order leaves each output row sorted by column.
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      const std::size_t dst = cursor[cols_idx_[k]]++;
      out.cols_idx_[dst] = static_cast<std::uint32_t>(r);
      out.values_[dst] = values_[k];
    }
  }
  return out;
}

Matrix SparseMatrix::to_dense() const {
  Matrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) out(r, cols_idx_[k]) = values_[k];
  }
  return out;
}

std::vector<SparseEntry> SparseMatrix::entries() const {
  std::vector<SparseEntry> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      out.push_back({static_cast<std::uint32_t>(r), cols_idx_[k], values_[k]});
    }
  }
  return out;
}

namespace {

void require(bool ok, const char* op, std::size_t a, std::size_t b) {
  if (!ok) {
    throw DataError(std::string(op) + ": shape mismatch (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
  }
}

}  // namespace

Matrix spmm(const SparseMatrix& s, const Matrix& m) {
  require(s.cols() == m.rows(), "spmm", s.cols(), m.rows());
  const auto& k = kernels::active();
  Matrix out(s.rows(), m.cols());
  for (std::size_t r = 0; r < s.rows(); ++r) {
    const auto cols = s.row_cols(r);
    const auto vals = s.row_values(r);
    double* dst = out.row(r).data();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      k.axpy(m.cols(), vals[i], m.row(cols[i]).data(), dst);
    }
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul", a.cols(), b.rows());
  const auto& k = kernels::active();
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* dst = out.row(i).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double s = a(i, p);
      if (s != 0.0) k.axpy(b.cols(), s, b.row(p).data(), dst);
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "matmul_tn", a.rows(), b.rows());
  const auto& k = kernels::active();
  Matrix out(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* src = b.row(i).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double s = a(i, p);
      if (s != 0.0) k.axpy(b.cols(), s, src, out.row(p).data());
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "matmul_nt", a.cols(), b.cols());
  const auto& k = kernels::active();
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      out(i, j) = k.dot(a.cols(), a.row(i).data(), b.row(j).data());
    }
  }
  return out;
}

}  // namespace skiprec
