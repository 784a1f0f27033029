#pragma once

// Compressed-sparse-row storage for real symmetric Hamiltonians, with a
// row-parallel matrix-vector kernel and its serial reference.

#include <cstdint>
#include <span>
#include <vector>

namespace dicke {

struct Triplet {
  std::int64_t row;
  std::int64_t col;
  double value;
};

class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Duplicate (row, col) entries are summed.  Entries are sorted by column
  /// within each row.
  static CsrMatrix from_triplets(std::int64_t dimension, std::vector<Triplet> triplets);

  std::int64_t dimension() const { return dimension_; }
  std::size_t nonzeros() const { return values_.size(); }

  /// Element lookup (binary search in the row); zero when absent.
  double at(std::int64_t row, std::int64_t col) const;

  bool is_symmetric(double tol = 0.0) const;

  /// Principal submatrix on the given (strictly increasing) index set.
  CsrMatrix principal_submatrix(std::span<const std::int64_t> indices) const;

  std::span<const std::int64_t> row_offsets() const { return row_ptr_; }
  std::span<const std::int64_t> columns() const { return cols_; }
  std::span<const double> values() const { return values_; }

 private:
  std::int64_t dimension_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int64_t> cols_;
  std::vector<double> values_;
};

/// y = A x, rows distributed over OpenMP threads.  Each row is summed in
/// storage order, so the result does not depend on the thread count.
void matvec(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

/// Serial reference of matvec.
void matvec_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

}  // namespace dicke
