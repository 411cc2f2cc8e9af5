#pragma once

// Dense exact linear algebra over F_q for small matrices: rank, determinant,
// kernel sampling and affine solves by in-place Gaussian elimination. Sizes
// in this project stay below ~40x40, so no pivot heuristics are needed.

#include <cstdint>
#include <vector>

#include "mcm/errors.hpp"
#include "mcm/fp.hpp"
#include "mcm/rng.hpp"

namespace mcm {

class FqMatrix {
public:
  FqMatrix() : rows_(0), cols_(0) {}
  FqMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  std::uint64_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  FqMatrix without_column(std::size_t c) const {
    FqMatrix m(rows_, cols_ - 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::size_t k = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j == c) continue;
        m.at(i, k++) = at(i, j);
      }
    }
    return m;
  }

  FqMatrix select_rows(const std::vector<std::size_t>& idx) const {
    FqMatrix m(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(idx[i], j);
    return m;
  }

  bool operator==(const FqMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

private:
  std::size_t rows_, cols_;
  std::vector<std::uint64_t> a_;
};

inline std::size_t fq_rank(const PrimeField& F, FqMatrix m) {
  std::size_t rank = 0;
  std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m.at(piv, col) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t j = col; j < cols; ++j) std::swap(m.at(piv, j), m.at(rank, j));
    std::uint64_t inv = F.inv(m.at(rank, col));
    for (std::size_t i = rank + 1; i < rows; ++i) {
      std::uint64_t f = F.mul(m.at(i, col), inv);
      if (f == 0) continue;
      for (std::size_t j = col; j < cols; ++j)
        m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(rank, j)));
    }
    ++rank;
  }
  return rank;
}

inline std::uint64_t fq_det(const PrimeField& F, FqMatrix m) {
  if (m.rows() != m.cols()) throw ShapeError("determinant of a non-square matrix");
  std::size_t n = m.rows();
  std::uint64_t det = F.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m.at(piv, col) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
      det = F.neg(det);
    }
    det = F.mul(det, m.at(col, col));
    std::uint64_t inv = F.inv(m.at(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      std::uint64_t f = F.mul(m.at(i, col), inv);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j)
        m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(col, j)));
    }
  }
  return det;
}

// Solve A x = b and randomize over the solution space: returns a particular
// solution plus a random kernel combination, or false when inconsistent.
inline bool fq_solve_random(const PrimeField& F, const FqMatrix& A,
                            const std::vector<std::uint64_t>& b,
                            Rng& rng, std::vector<std::uint64_t>& out) {
  std::size_t rows = A.rows(), cols = A.cols();
  FqMatrix m(rows, cols + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = A.at(i, j);
    m.at(i, cols) = b[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m.at(piv, col) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t j = col; j <= cols; ++j) std::swap(m.at(piv, j), m.at(rank, j));
    std::uint64_t inv = F.inv(m.at(rank, col));
    for (std::size_t j = col; j <= cols; ++j) m.at(rank, j) = F.mul(m.at(rank, j), inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      std::uint64_t f = m.at(i, col);
      if (f == 0) continue;
      for (std::size_t j = col; j <= cols; ++j)
        m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(rank, j)));
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < rows; ++i)
    if (m.at(i, cols) != 0) return false;

  // free variables drawn uniformly, pivots back-substituted
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  out.assign(cols, 0);
  for (std::size_t j = 0; j < cols; ++j)
    if (!is_pivot[j]) out[j] = F.random(rng);
  for (std::size_t i = 0; i < rank; ++i) {
    std::uint64_t v = m.at(i, cols);
    for (std::size_t j = 0; j < cols; ++j) {
      if (j == pivot_col[i] || m.at(i, j) == 0) continue;
      v = F.sub(v, F.mul(m.at(i, j), out[j]));
    }
    out[pivot_col[i]] = v;
  }
  return true;
}

// Random (r x c) matrix of rank exactly k (k <= min(r, c)).
inline FqMatrix fq_random_rank(const PrimeField& F, std::size_t r, std::size_t c,
                               std::size_t k, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    FqMatrix U(r, k), V(k, c), M(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < k; ++j) U.at(i, j) = F.random(rng);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < c; ++j) V.at(i, j) = F.random(rng);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t t = 0; t < k; ++t) acc = F.add(acc, F.mul(U.at(i, t), V.at(t, j)));
        M.at(i, j) = acc;
      }
    if (fq_rank(F, M) == k) return M;
  }
  throw SamplingFailed("could not hit the requested rank");
}

inline FqMatrix fq_random_invertible(const PrimeField& F, std::size_t n, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    FqMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) M.at(i, j) = F.random(rng);
    if (fq_det(F, M) != 0) return M;
  }
  throw SamplingFailed("could not draw an invertible matrix");
}

inline FqMatrix fq_mul(const PrimeField& F, const FqMatrix& A, const FqMatrix& B) {
  if (A.cols() != B.rows()) throw ShapeError("matrix product shape mismatch");
  FqMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < A.cols(); ++t) acc = F.add(acc, F.mul(A.at(i, t), B.at(t, j)));
      C.at(i, j) = acc;
    }
  return C;
}

} // namespace mcm
