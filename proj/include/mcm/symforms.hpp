#pragma once

// Equation/differential matrices and the determinantal symmetric forms.
// A FormMatrix carries, per column, the coefficient block and the exponent
// of its carrying coordinate; value rows copy the equations, differential
// rows copy their differentials. Determinants of column-deleted
// submatrices, divided by the matching coordinate power, are the forms.
// Symbolic expansion is used for small exactness checks, point evaluation
// for the sampled identities.

#include <vector>

#include "mcm/hypersurfaces.hpp"
#include "mcm/linalg.hpp"
#include "mcm/poly.hpp"

namespace mcm {

template <class R>
struct FormMatrix {
  R ring;
  std::size_t nv = 0;
  std::int64_t c = 0;                       // differential rows available
  std::vector<std::int64_t> coords;         // carrying coordinate per column
  std::vector<std::int64_t> lambda;         // carrying exponent per column
  std::vector<BigInt> deg_f;                // equation degrees, one per value row
  std::vector<std::vector<MultiPoly<R>>> blocks; // blocks[i][col], value rows

  std::size_t cols() const { return coords.size(); }
  std::size_t value_rows() const { return blocks.size(); }

  // entry of the proportional "unit" matrix: block * z_j
  MultiPoly<R> tilde(std::size_t i, std::size_t col) const {
    return blocks[i][col].times_monomial(
        Monomial::var(nv, static_cast<std::size_t>(coords[col]), 1));
  }

  // differential-row entry: z_j dA + lambda_j A dz_j
  MultiPoly<R> bform(std::size_t i, std::size_t col) const {
    const std::size_t j = static_cast<std::size_t>(coords[col]);
    MultiPoly<R> t1 = blocks[i][col].differential().times_monomial(Monomial::var(nv, j, 1));
    MultiPoly<R> t2 = blocks[i][col]
                          .scaled(ring.from_int(static_cast<long long>(lambda[col])))
                          .times_monomial(Monomial::dvar(nv, j, 1));
    return t1 + t2;
  }

  // full equation term: block * z_j^lambda_j
  MultiPoly<R> kterm(std::size_t i, std::size_t col) const {
    return blocks[i][col].times_monomial(
        Monomial::var(nv, static_cast<std::size_t>(coords[col]), lambda[col]));
  }
};

// Fermat-shaped matrix straight from blocks (demo systems, tests).
template <class R>
FormMatrix<R> make_form_matrix(const R& ring, std::size_t nv, std::int64_t c,
                               std::vector<std::vector<MultiPoly<R>>> blocks,
                               std::vector<std::int64_t> lambda, std::vector<BigInt> deg_f) {
  FormMatrix<R> m{ring, nv, c, {}, std::move(lambda), std::move(deg_f), std::move(blocks)};
  for (std::size_t j = 0; j < m.lambda.size(); ++j)
    m.coords.push_back(static_cast<std::int64_t>(j));
  for (const auto& row : m.blocks)
    if (row.size() != m.lambda.size()) throw ShapeError("block row width mismatch");
  return m;
}

// Matrix of a first/second-kind rewritten system: the surviving dominant
// columns, in ascending coordinate order.
template <class R>
FormMatrix<R> make_form_matrix(const HypersurfaceSystem<R>& sys, const RewrittenSystem<R>& rw) {
  if (rw.variant.kind == ManipKind::collapse)
    throw InvalidSelection("form matrices attach to first/second-kind variants");
  FormMatrix<R> m{sys.ring, sys.nvars(), sys.config.c, {}, {}, {}, {}};
  for (std::size_t i = 0; i < sys.F.size(); ++i) m.deg_f.push_back(sys.schedule.deg_f(i));
  m.blocks.assign(sys.F.size(), {});
  for (std::size_t t : rw.dominant_columns()) {
    const auto& col = rw.columns[t];
    m.coords.push_back(col.coord);
    m.lambda.push_back(col.lambda);
    for (std::size_t i = 0; i < sys.F.size(); ++i) m.blocks[i].push_back(col.block[i]);
  }
  return m;
}

// Row selection: all value rows listed in rows_i (1-based), then the
// differential rows of rows_j (1-based, each <= c).
struct RowSelection {
  std::vector<std::int64_t> rows_i;
  std::vector<std::int64_t> rows_j;

  static RowSelection full(std::int64_t cr, std::int64_t l2) {
    RowSelection s;
    for (std::int64_t i = 1; i <= cr; ++i) s.rows_i.push_back(i);
    for (std::int64_t j = 1; j <= l2; ++j) s.rows_j.push_back(j);
    return s;
  }
};

namespace detail {

template <class R>
MultiPoly<R> laplace_det(const R& ring, std::size_t nv,
                         const std::vector<std::vector<MultiPoly<R>>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return MultiPoly<R>::constant(ring, nv, ring.one());
  if (n == 1) return m[0][0];
  MultiPoly<R> acc(ring, nv);
  for (std::size_t k = 0; k < n; ++k) {
    if (m[0][k].is_zero()) continue;
    std::vector<std::vector<MultiPoly<R>>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<MultiPoly<R>> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    MultiPoly<R> term = m[0][k] * laplace_det(ring, nv, minor);
    acc = (k % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

} // namespace detail

// Symbolic square matrix of selected rows with one column deleted.
template <class R>
std::vector<std::vector<MultiPoly<R>>> selected_entries(const FormMatrix<R>& m,
                                                        const RowSelection& sel,
                                                        std::size_t deleted_col) {
  if (sel.rows_i.size() + sel.rows_j.size() + 1 != m.cols())
    throw ShapeError("selection does not leave a square matrix after deletion");
  std::vector<std::vector<MultiPoly<R>>> rows;
  for (auto i : sel.rows_i) {
    std::vector<MultiPoly<R>> row;
    for (std::size_t col = 0; col < m.cols(); ++col)
      if (col != deleted_col) row.push_back(m.tilde(static_cast<std::size_t>(i - 1), col));
    rows.push_back(std::move(row));
  }
  for (auto j : sel.rows_j) {
    if (j > m.c) throw InvalidSelection("differential row beyond the available range");
    std::vector<MultiPoly<R>> row;
    for (std::size_t col = 0; col < m.cols(); ++col)
      if (col != deleted_col) row.push_back(m.bform(static_cast<std::size_t>(j - 1), col));
    rows.push_back(std::move(row));
  }
  return rows;
}

// A determinantal form on the chart where the deleted column's coordinate
// is nonzero: sign * numerator / z_j^(lambda_j - 1).
template <class R>
struct OmegaHat {
  MultiPoly<R> numerator; // includes the sign
  std::int64_t coord = 0;
  std::int64_t denom_exponent = 0;
  std::int64_t form_degree = 0;
};

template <class R>
OmegaHat<R> omega_hat(const FormMatrix<R>& m, const RowSelection& sel, std::size_t col) {
  auto rows = selected_entries(m, sel, col);
  MultiPoly<R> det = detail::laplace_det(m.ring, m.nv, rows);
  if (col % 2 == 1) det = -det;
  OmegaHat<R> w;
  w.numerator = std::move(det);
  w.coord = m.coords[col];
  w.denom_exponent = m.lambda[col] - 1;
  w.form_degree = static_cast<std::int64_t>(sel.rows_j.size());
  return w;
}

// ---------------------------------------------------------------------------
// Point-evaluation paths over a prime field.

struct JetPoint {
  std::vector<std::uint64_t> z;
  std::vector<std::uint64_t> xi;
};

// Numeric value of the selected, column-deleted determinant (the omega-hat
// numerator, sign included).
inline std::uint64_t eval_det(const PrimeField& F, const std::vector<std::vector<std::uint64_t>>& e) {
  FqMatrix m(e.size(), e.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) m.at(i, j) = e[i][j];
  return fq_det(F, m);
}

template <class R>
struct FormMatrixEval {
  const FormMatrix<R>* m;
  std::vector<std::vector<MultiPoly<R>>> tilde; // cached entry polynomials
  std::vector<std::vector<MultiPoly<R>>> bform;

  explicit FormMatrixEval(const FormMatrix<R>& fm) : m(&fm) {
    for (std::size_t i = 0; i < fm.value_rows(); ++i) {
      std::vector<MultiPoly<R>> trow, brow;
      for (std::size_t col = 0; col < fm.cols(); ++col) {
        trow.push_back(fm.tilde(i, col));
        if (static_cast<std::int64_t>(i) < fm.c) brow.push_back(fm.bform(i, col));
      }
      tilde.push_back(std::move(trow));
      if (static_cast<std::int64_t>(i) < fm.c) bform.push_back(std::move(brow));
    }
  }

  std::uint64_t det_without(const PrimeField& F, const RowSelection& sel, std::size_t del,
                            const std::vector<std::uint64_t>& z,
                            const std::vector<std::uint64_t>& xi) const {
    std::vector<std::vector<std::uint64_t>> rows;
    for (auto i : sel.rows_i) {
      std::vector<std::uint64_t> row;
      for (std::size_t col = 0; col < m->cols(); ++col)
        if (col != del) row.push_back(tilde[static_cast<std::size_t>(i - 1)][col].evaluate(z, &xi));
      rows.push_back(std::move(row));
    }
    for (auto j : sel.rows_j) {
      std::vector<std::uint64_t> row;
      for (std::size_t col = 0; col < m->cols(); ++col)
        if (col != del) row.push_back(bform[static_cast<std::size_t>(j - 1)][col].evaluate(z, &xi));
      rows.push_back(std::move(row));
    }
    std::uint64_t d = eval_det(F, rows);
    return (del % 2 == 1) ? F.neg(d) : d;
  }

  // omega-hat value on the chart of column `del` (coordinate must be nonzero)
  std::uint64_t omega_value(const PrimeField& F, const RowSelection& sel, std::size_t del,
                            const std::vector<std::uint64_t>& z,
                            const std::vector<std::uint64_t>& xi) const {
    std::uint64_t num = det_without(F, sel, del, z, xi);
    std::uint64_t zc = z[static_cast<std::size_t>(m->coords[del])];
    return F.mul(num, F.inv(F.pow_signed(zc, m->lambda[del] - 1)));
  }
};

// Term columns of a rewritten system together with their differentials,
// cached for fast evaluation at jet points. Rows: c+r values then c
// differentials, columns in the rewritten system's order.
template <class R>
struct TermMatrix {
  std::size_t cols = 0;
  std::int64_t c = 0;
  std::vector<std::vector<MultiPoly<R>>> term;  // [i][col]
  std::vector<std::vector<MultiPoly<R>>> dterm; // [i][col], i < c

  TermMatrix(const HypersurfaceSystem<R>& sys, const RewrittenSystem<R>& rw) {
    cols = rw.columns.size();
    c = sys.config.c;
    for (std::size_t i = 0; i < sys.F.size(); ++i) {
      std::vector<MultiPoly<R>> trow, drow;
      for (const auto& col : rw.columns) {
        MultiPoly<R> t = col.block[i].times_monomial(col.factor);
        if (static_cast<std::int64_t>(i) < c) drow.push_back(t.differential());
        trow.push_back(std::move(t));
      }
      term.push_back(std::move(trow));
      if (static_cast<std::int64_t>(i) < c) dterm.push_back(std::move(drow));
    }
  }

  FqMatrix values_at(const std::vector<std::uint64_t>& z) const {
    FqMatrix m(term.size(), cols);
    for (std::size_t i = 0; i < term.size(); ++i)
      for (std::size_t col = 0; col < cols; ++col) m.at(i, col) = term[i][col].evaluate(z);
    return m;
  }

  // full stacked matrix: value rows then differential rows
  FqMatrix stacked_at(const std::vector<std::uint64_t>& z,
                      const std::vector<std::uint64_t>& xi) const {
    FqMatrix m(term.size() + dterm.size(), cols);
    for (std::size_t i = 0; i < term.size(); ++i)
      for (std::size_t col = 0; col < cols; ++col) m.at(i, col) = term[i][col].evaluate(z);
    for (std::size_t i = 0; i < dterm.size(); ++i)
      for (std::size_t col = 0; col < cols; ++col)
        m.at(term.size() + i, col) = dterm[i][col].evaluate(z, &xi);
    return m;
  }
};

} // namespace mcm
