#include "dicke/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dicke/model.hpp"

namespace dicke {

CsrMatrix CsrMatrix::from_triplets(std::int64_t dimension, std::vector<Triplet> triplets) {
  if (dimension < 0) throw DomainError("negative matrix dimension");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.dimension_ = dimension;
  m.row_ptr_.assign(static_cast<std::size_t>(dimension) + 1, 0);
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::int64_t last_row = -1, last_col = -1;
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= dimension || t.col < 0 || t.col >= dimension) {
      throw DomainError("triplet index out of range");
    }
    if (t.row == last_row && t.col == last_col) {
      m.values_.back() += t.value;
      continue;
    }
    last_row = t.row;
    last_col = t.col;
    m.cols_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[static_cast<std::size_t>(t.row) + 1];
  }
  for (std::size_t r = 1; r < m.row_ptr_.size(); ++r) m.row_ptr_[r] += m.row_ptr_[r - 1];
  return m;
}

double CsrMatrix::at(std::int64_t row, std::int64_t col) const {
  if (row < 0 || row >= dimension_ || col < 0 || col >= dimension_) {
    throw DomainError("matrix index out of range");
  }
  const auto first = cols_.begin() + row_ptr_[static_cast<std::size_t>(row)];
  const auto last = cols_.begin() + row_ptr_[static_cast<std::size_t>(row) + 1];
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

bool CsrMatrix::is_symmetric(double tol) const {
  for (std::int64_t r = 0; r < dimension_; ++r) {
    for (auto k = row_ptr_[static_cast<std::size_t>(r)];
         k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      const std::int64_t c = cols_[static_cast<std::size_t>(k)];
      if (std::abs(values_[static_cast<std::size_t>(k)] - at(c, r)) > tol) return false;
    }
  }
  return true;
}

CsrMatrix CsrMatrix::principal_submatrix(std::span<const std::int64_t> indices) const {
  std::vector<std::int64_t> position(static_cast<std::size_t>(dimension_), -1);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw DomainError("submatrix indices must be strictly increasing");
    }
    position[static_cast<std::size_t>(indices[i])] = static_cast<std::int64_t>(i);
  }
  CsrMatrix m;
  m.dimension_ = static_cast<std::int64_t>(indices.size());
  m.row_ptr_.assign(indices.size() + 1, 0);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto r = static_cast<std::size_t>(indices[i]);
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::int64_t p = position[static_cast<std::size_t>(cols_[static_cast<std::size_t>(k)])];
      if (p < 0) continue;
      m.cols_.push_back(p);
      m.values_.push_back(values_[static_cast<std::size_t>(k)]);
    }
    m.row_ptr_[i + 1] = static_cast<std::int64_t>(m.cols_.size());
  }
  return m;
}

namespace {

void check_shapes(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::size_t>(a.dimension());
  if (x.size() != n || y.size() != n) throw DomainError("matvec dimension mismatch");
}

inline double row_dot(const CsrMatrix& a, std::int64_t r, std::span<const double> x) {
  const auto rows = a.row_offsets();
  const auto cols = a.columns();
  const auto vals = a.values();
  double s = 0.0;
  for (auto k = rows[static_cast<std::size_t>(r)]; k < rows[static_cast<std::size_t>(r) + 1];
       ++k) {
    s += vals[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])];
  }
  return s;
}

}  // namespace

void matvec(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_shapes(a, x, y);
  const std::int64_t n = a.dimension();
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::int64_t r = 0; r < n; ++r) {
    y[static_cast<std::size_t>(r)] = row_dot(a, r, x);
  }
}

void matvec_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_shapes(a, x, y);
  for (std::int64_t r = 0; r < a.dimension(); ++r) {
    y[static_cast<std::size_t>(r)] = row_dot(a, r, x);
  }
}

}  // namespace dicke
