#pragma once

// Brute-force / Monte-Carlo codimension oracle for the rank-condition
// matrix families. Dimensions are read off the slope of log(point count)
// against log(q) across small prime fields; exhaustive counts are used
// whenever the enumeration budget allows, uniform hit-count sampling
// otherwise. Enumeration and sampling are chunked with per-chunk derived
// seeds, so results do not depend on the worker count.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mcm/bounds.hpp"
#include "mcm/linalg.hpp"
#include "mcm/ring.hpp"

namespace mcm {

enum class Family { X, X0, Xpq, M, Mk, Mminus, JS };

inline const char* family_name(Family f) {
  switch (f) {
  case Family::X: return "X";
  case Family::X0: return "X0";
  case Family::Xpq: return "Xpq";
  case Family::M: return "M";
  case Family::Mk: return "Mk";
  case Family::Mminus: return "Mminus";
  case Family::JS: return "JS";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "X") return Family::X;
  if (s == "X0") return Family::X0;
  if (s == "Xpq") return Family::Xpq;
  if (s == "M") return Family::M;
  if (s == "Mk") return Family::Mk;
  if (s == "Mminus") return Family::Mminus;
  if (s == "JS") return Family::JS;
  throw InvalidConfig("unknown family: " + s);
}

struct RankVarietySpec {
  Family family = Family::X;
  std::int64_t p = 2;
  std::int64_t l = 0;     // rank bound (X, X0, Xpq) or rank of the fixed block (JS)
  std::int64_t qcols = 2; // column-pair count for Xpq
  std::int64_t N = 2, c = 1, r = 0;
  std::int64_t k = 0; // moving-column count for Mk
  std::int64_t j = 0; // target rank for JS

  void validate() const {
    switch (family) {
    case Family::X:
    case Family::X0:
      if (p < 2 || l < 0 || l > p) throw InvalidConfig("need p >= 2 and 0 <= l <= p");
      break;
    case Family::Xpq:
      if (p < qcols || qcols < 2 || l < 0 || l > qcols)
        throw InvalidConfig("need p >= q >= 2 and 0 <= l <= q");
      break;
    case Family::M:
      if (2 * c + r < N || N < 1) throw InvalidConfig("need 2c + r >= N >= 1");
      break;
    case Family::Mk:
      if (2 * c + r < N || k < 1 || k > N - 1)
        throw InvalidConfig("need 2c + r >= N and 1 <= k <= N - 1");
      break;
    case Family::Mminus:
      if (2 * c + r < N || N < 1) throw InvalidConfig("need 2c + r >= N >= 1");
      break;
    case Family::JS:
      if (p < 3 || l < 0 || l > p - 1 || (j != l && j != l + 1))
        throw InvalidConfig("need p >= 3, 0 <= l <= p-1 and j in {l, l+1}");
      break;
    }
  }

  std::size_t height() const {
    switch (family) {
    case Family::X:
    case Family::X0: return static_cast<std::size_t>(p);
    case Family::Xpq: return static_cast<std::size_t>(p);
    case Family::M:
    case Family::Mk:
    case Family::Mminus: return static_cast<std::size_t>(2 * c + r);
    case Family::JS: return static_cast<std::size_t>(p);
    }
    return 0;
  }

  std::size_t width() const {
    switch (family) {
    case Family::X:
    case Family::X0: return static_cast<std::size_t>(2 * p);
    case Family::Xpq: return static_cast<std::size_t>(2 * qcols);
    case Family::M: return static_cast<std::size_t>(2 * N + 2);
    case Family::Mk: return static_cast<std::size_t>(N + k + 2);
    case Family::Mminus: return static_cast<std::size_t>(N + 1);
    case Family::JS: return static_cast<std::size_t>(p);
    }
    return 0;
  }

  // dimension of the ambient space the codimension refers to
  std::int64_t ambient_dim() const {
    if (family == Family::JS) return 2 * p - 1;
    return static_cast<std::int64_t>(height() * width());
  }

  // number of freely enumerated entries (X0 pins one column, JS fixes a block)
  std::int64_t free_dim() const {
    switch (family) {
    case Family::X0: return ambient_dim() - p;
    case Family::JS: return 2 * p - 1;
    default: return ambient_dim();
    }
  }

  std::int64_t expected_codim() const {
    switch (family) {
    case Family::X:
      return l == p ? p : l + (p - l) * (p - l) + 1;
    case Family::X0:
      return (l >= p - 1) ? p + 2 : p + (p - l) * (p - l);
    case Family::Xpq:
      return l == qcols ? p : (p - l) * (qcols - l) + p - qcols + l + 1;
    case Family::M:
      return N + 1 + 2 * c + r;
    case Family::Mk:
      return 2 * (2 * c + r) - N + k + 1;
    case Family::Mminus:
      return 2 * (2 * c + r) - N + 1;
    case Family::JS:
      return j == l ? 2 * (p - 1 - l) + 1 : p - 1 - l;
    }
    return 0;
  }

  // families whose published value is only a lower bound on the codimension
  bool expected_is_bound_only() const { return family == Family::M; }

  std::string str() const {
    std::string s = family_name(family);
    switch (family) {
    case Family::X:
    case Family::X0: s += "(p=" + std::to_string(p) + ",l=" + std::to_string(l) + ")"; break;
    case Family::Xpq:
      s += "(p=" + std::to_string(p) + ",q=" + std::to_string(qcols) + ",l=" + std::to_string(l) + ")";
      break;
    case Family::M:
    case Family::Mminus:
      s += "(N=" + std::to_string(N) + ",c=" + std::to_string(c) + ",r=" + std::to_string(r) + ")";
      break;
    case Family::Mk:
      s += "(N=" + std::to_string(N) + ",c=" + std::to_string(c) + ",r=" + std::to_string(r) +
           ",k=" + std::to_string(k) + ")";
      break;
    case Family::JS:
      s += "(p=" + std::to_string(p) + ",lJ=" + std::to_string(l) + ",j=" + std::to_string(j) + ")";
      break;
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// Membership predicates. Matrices are row-major with the spec's shape; the
// tests run by exact Gaussian elimination on small column sets.

namespace codim_detail {

constexpr std::size_t kMaxH = 12, kMaxW = 28;

struct Scratch {
  std::uint64_t buf[kMaxH * kMaxW];
};

// rank of `w` columns of height `h` gathered in scratch
inline std::size_t rank_buf(const PrimeField& F, std::uint64_t* a, std::size_t h, std::size_t w) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < w && rank < h; ++col) {
    std::size_t piv = rank;
    while (piv < h && a[piv * w + col] == 0) ++piv;
    if (piv == h) continue;
    if (piv != rank)
      for (std::size_t j = col; j < w; ++j) std::swap(a[piv * w + j], a[rank * w + j]);
    std::uint64_t inv = F.inv(a[rank * w + col]);
    for (std::size_t i = rank + 1; i < h; ++i) {
      std::uint64_t f = F.mul(a[i * w + col], inv);
      if (f == 0) continue;
      for (std::size_t j = col; j < w; ++j)
        a[i * w + j] = F.sub(a[i * w + j], F.mul(f, a[rank * w + j]));
    }
    ++rank;
  }
  return rank;
}

// Column accessor over a row-major matrix buffer.
struct MatView {
  const std::uint64_t* a;
  std::size_t h, w;
  std::uint64_t at(std::size_t i, std::size_t j) const { return a[i * w + j]; }
};

// gather the columns listed in cols (with an optional added vector per
// column) and compute their rank
inline std::size_t rank_of_columns(const PrimeField& F, const MatView& m,
                                   const std::uint64_t* extra, // h values or nullptr
                                   const std::size_t* cols, std::size_t ncols,
                                   std::size_t extra_at, Scratch& s) {
  const std::size_t h = m.h;
  for (std::size_t t = 0; t < ncols; ++t)
    for (std::size_t i = 0; i < h; ++i) s.buf[i * ncols + t] = m.at(i, cols[t]);
  if (extra != nullptr)
    for (std::size_t i = 0; i < h; ++i)
      s.buf[i * ncols + extra_at] = F.add(s.buf[i * ncols + extra_at], extra[i]);
  return rank_buf(F, s.buf, h, ncols);
}

// The shared rank-condition battery: columns a_0..a_m paired with columns
// b_0..b_t (t = m for the symmetric families, smaller for the reduced
// ones). `pull_range` tells which positions may be pulled (nu range),
// `bound` the rank ceiling.
struct PairedColumns {
  MatView m;
  std::vector<std::size_t> acols, bcols;
};

inline bool first_kind_conditions(const PrimeField& F, const PairedColumns& pc,
                                  std::size_t pull_count, std::size_t bound, Scratch& s) {
  const std::size_t h = pc.m.h, na = pc.acols.size();
  std::uint64_t sumb[kMaxH];
  for (std::size_t i = 0; i < h; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t b : pc.bcols) acc = F.add(acc, pc.m.at(i, b));
    sumb[i] = acc;
  }
  std::size_t cols[kMaxW];
  for (std::size_t t = 0; t < na; ++t) cols[t] = pc.acols[t];
  for (std::size_t nu = 0; nu < pull_count; ++nu) {
    if (rank_of_columns(F, pc.m, sumb, cols, na, nu, s) > bound) return false;
  }
  return true;
}

inline bool second_kind_conditions(const PrimeField& F, const PairedColumns& pc,
                                   std::size_t tau_count, std::size_t bound, Scratch& s,
                                   std::size_t rho_limit = std::size_t(-1)) {
  const std::size_t h = pc.m.h, na = pc.acols.size();
  const std::size_t rho_end = std::min(na, rho_limit + 1);
  // 0-based tau means tau+1 leading a+b columns; the pulled column gets
  // the tail sum of b's
  for (std::size_t tau = 0; tau < tau_count; ++tau) {
    std::uint64_t tail[kMaxH];
    for (std::size_t i = 0; i < h; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t t = tau + 1; t < pc.bcols.size(); ++t)
        acc = F.add(acc, pc.m.at(i, pc.bcols[t]));
      tail[i] = acc;
    }
    for (std::size_t rho = tau + 1; rho < rho_end; ++rho) {
      // build columns directly in scratch
      for (std::size_t t = 0; t < na; ++t) {
        for (std::size_t i = 0; i < h; ++i) {
          std::uint64_t v = pc.m.at(i, pc.acols[t]);
          if (t <= tau) v = F.add(v, pc.m.at(i, pc.bcols[t]));
          else if (t == rho) v = F.add(v, tail[i]);
          s.buf[i * na + t] = v;
        }
      }
      if (rank_buf(F, s.buf, h, na) > bound) return false;
    }
  }
  return true;
}

} // namespace codim_detail

inline bool membership(const PrimeField& F, const RankVarietySpec& spec,
                       const std::uint64_t* a /* row-major h x w */) {
  using namespace codim_detail;
  Scratch s;
  const std::size_t h = spec.height(), w = spec.width();
  MatView m{a, h, w};

  switch (spec.family) {
  case Family::X:
  case Family::X0: {
    const std::size_t p = static_cast<std::size_t>(spec.p);
    if (spec.family == Family::X0) {
      for (std::size_t i = 0; i < h; ++i)
        if (F.add(m.at(i, 0), m.at(i, p)) != 0) return false;
    }
    PairedColumns pc{m, {}, {}};
    for (std::size_t t = 0; t < p; ++t) pc.acols.push_back(t);
    for (std::size_t t = 0; t < p; ++t) pc.bcols.push_back(p + t);
    {
      std::size_t cols[kMaxW];
      for (std::size_t t = 0; t < p; ++t) cols[t] = t;
      if (rank_of_columns(F, m, nullptr, cols, p, 0, s) > static_cast<std::size_t>(spec.l))
        return false;
    }
    if (!first_kind_conditions(F, pc, p, p - 1, s)) return false;
    if (!second_kind_conditions(F, pc, p - 1, p - 1, s)) return false;
    return true;
  }
  case Family::Xpq: {
    const std::size_t qc = static_cast<std::size_t>(spec.qcols);
    const std::size_t p = static_cast<std::size_t>(spec.p);
    PairedColumns pc{m, {}, {}};
    for (std::size_t t = 0; t < qc; ++t) pc.acols.push_back(t);
    for (std::size_t t = 0; t < qc; ++t) pc.bcols.push_back(qc + t);
    {
      std::size_t cols[kMaxW];
      for (std::size_t t = 0; t < qc; ++t) cols[t] = t;
      if (rank_of_columns(F, m, nullptr, cols, qc, 0, s) > static_cast<std::size_t>(spec.l))
        return false;
    }
    if (!first_kind_conditions(F, pc, qc, p - 1, s)) return false;
    if (!second_kind_conditions(F, pc, qc - 1, qc - 1, s)) return false;
    return true;
  }
  case Family::M: {
    const std::size_t np1 = static_cast<std::size_t>(spec.N + 1);
    for (std::size_t i = 0; i < h; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t jj = 0; jj < w; ++jj) acc = F.add(acc, m.at(i, jj));
      if (acc != 0) return false;
    }
    PairedColumns pc{m, {}, {}};
    for (std::size_t t = 0; t < np1; ++t) pc.acols.push_back(t);
    for (std::size_t t = 0; t < np1; ++t) pc.bcols.push_back(np1 + t);
    if (!first_kind_conditions(F, pc, np1, static_cast<std::size_t>(spec.N - 1), s)) return false;
    if (!second_kind_conditions(F, pc, np1 - 1, static_cast<std::size_t>(spec.N - 1), s))
      return false;
    return true;
  }
  case Family::Mk: {
    const std::size_t np1 = static_cast<std::size_t>(spec.N + 1);
    const std::size_t kc = static_cast<std::size_t>(spec.k + 1);
    for (std::size_t i = 0; i < h; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t jj = 0; jj < w; ++jj) acc = F.add(acc, m.at(i, jj));
      if (acc != 0) return false;
    }
    PairedColumns pc{m, {}, {}};
    for (std::size_t t = 0; t < np1; ++t) pc.acols.push_back(t);
    for (std::size_t t = 0; t < kc; ++t) pc.bcols.push_back(np1 + t);
    // only the first k+1 positions can be pulled
    if (!first_kind_conditions(F, pc, kc, static_cast<std::size_t>(spec.N - 1), s)) return false;
    if (!second_kind_conditions(F, pc, kc - 1, static_cast<std::size_t>(spec.N - 1), s, kc - 1))
      return false;
    return true;
  }
  case Family::Mminus: {
    const std::size_t np1 = static_cast<std::size_t>(spec.N + 1);
    for (std::size_t i = 0; i < h; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t jj = 0; jj < w; ++jj) acc = F.add(acc, m.at(i, jj));
      if (acc != 0) return false;
    }
    std::size_t cols[kMaxW];
    for (std::size_t nu = 0; nu < np1; ++nu) {
      std::size_t t = 0;
      for (std::size_t jj = 0; jj < np1; ++jj)
        if (jj != nu) cols[t++] = jj;
      if (rank_of_columns(F, m, nullptr, cols, np1 - 1, 0, s) >
          static_cast<std::size_t>(spec.N - 1))
        return false;
    }
    return true;
  }
  case Family::JS: {
    std::size_t p = static_cast<std::size_t>(spec.p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t jj = 0; jj < p; ++jj) s.buf[i * p + jj] = m.at(i, jj);
    return rank_buf(F, s.buf, p, p) <= static_cast<std::size_t>(spec.j);
  }
  }
  return false;
}

inline bool membership(const PrimeField& F, const RankVarietySpec& spec, const FqMatrix& m) {
  std::vector<std::uint64_t> flat(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) flat[i * m.cols() + j] = m.at(i, j);
  return membership(F, spec, flat.data());
}

// ---------------------------------------------------------------------------
// Counting. Work is split into fixed chunks with chunk-derived seeds;
// worker count never changes any result.

inline unsigned worker_count() {
  if (const char* env = std::getenv("MCM_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 8u);
}

template <class ChunkFn>
void run_chunks(std::size_t nchunks, ChunkFn&& fn) {
  unsigned workers = std::min<std::size_t>(worker_count(), nchunks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < nchunks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next(0);
  std::vector<std::thread> pool;
  for (unsigned wkr = 0; wkr < workers; ++wkr)
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= nchunks) return;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

// The JS family needs its fixed block instantiated per field; other
// families enumerate all free entries directly.
struct PreparedSpec {
  RankVarietySpec spec;
  std::vector<std::uint64_t> fixed; // row-major template with free slots zeroed
  std::vector<std::size_t> free_pos;

  // complete the matrix from free-entry digits
  void fill(std::uint64_t* a, const std::uint64_t* digits) const {
    for (std::size_t i = 0; i < fixed.size(); ++i) a[i] = fixed[i];
    for (std::size_t t = 0; t < free_pos.size(); ++t) a[free_pos[t]] = digits[t];
  }
};

inline PreparedSpec prepare_spec(const PrimeField& F, const RankVarietySpec& spec, Rng rng) {
  spec.validate();
  PreparedSpec ps;
  ps.spec = spec;
  const std::size_t h = spec.height(), w = spec.width();
  ps.fixed.assign(h * w, 0);
  if (spec.family == Family::JS) {
    FqMatrix J = fq_random_rank(F, h - 1, w - 1, static_cast<std::size_t>(spec.l), rng);
    for (std::size_t i = 1; i < h; ++i)
      for (std::size_t j = 1; j < w; ++j) ps.fixed[i * w + j] = J.at(i - 1, j - 1);
    for (std::size_t j = 0; j < w; ++j) ps.free_pos.push_back(j);
    for (std::size_t i = 1; i < h; ++i) ps.free_pos.push_back(i * w);
  } else if (spec.family == Family::X0) {
    // alpha_1 is derived from beta_1
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j)
        if (j != 0) ps.free_pos.push_back(i * w + j);
  } else {
    for (std::size_t i = 0; i < h * w; ++i) ps.free_pos.push_back(i);
  }
  return ps;
}

inline void complete_matrix(const PrimeField& F, const PreparedSpec& ps, std::uint64_t* a) {
  if (ps.spec.family == Family::X0) {
    const std::size_t p = static_cast<std::size_t>(ps.spec.p), w = ps.spec.width();
    for (std::size_t i = 0; i < ps.spec.height(); ++i) a[i * w] = F.neg(a[i * w + p]);
  }
}

inline BigInt count_points_prepared(const PrimeField& F, const PreparedSpec& ps,
                                    const BigInt& budget) {
  const std::size_t nfree = ps.free_pos.size();
  const std::uint64_t q = F.modulus();
  BigInt total_b = big_pow(BigInt(static_cast<long long>(q)), static_cast<std::int64_t>(nfree));
  if (total_b > budget) throw BudgetExceeded("enumeration space exceeds the budget");
  const std::uint64_t total = static_cast<std::uint64_t>(total_b);

  const std::size_t nchunks = total > 1u << 16 ? 64 : 1;
  std::vector<std::uint64_t> counts(nchunks, 0);
  run_chunks(nchunks, [&](std::size_t chunk) {
    std::uint64_t lo = total / nchunks * chunk + std::min<std::uint64_t>(chunk, total % nchunks);
    std::uint64_t len = total / nchunks + (chunk < total % nchunks ? 1 : 0);
    std::uint64_t digits[64];
    std::uint64_t idx = lo;
    for (std::size_t t = 0; t < nfree; ++t) {
      digits[t] = idx % q;
      idx /= q;
    }
    std::uint64_t a[codim_detail::kMaxH * codim_detail::kMaxW];
    std::uint64_t local = 0;
    for (std::uint64_t step = 0; step < len; ++step) {
      ps.fill(a, digits);
      complete_matrix(F, ps, a);
      if (membership(F, ps.spec, a)) ++local;
      // odometer
      for (std::size_t t = 0; t < nfree; ++t) {
        if (++digits[t] < q) break;
        digits[t] = 0;
      }
    }
    counts[chunk] = local;
  });
  std::uint64_t acc = 0;
  for (auto v : counts) acc += v;
  return BigInt(static_cast<long long>(acc));
}

inline BigInt count_points(const RankVarietySpec& spec, std::uint64_t q,
                           const BigInt& budget = BigInt(1) << 30, std::uint64_t seed = 1) {
  PrimeField F(q);
  PreparedSpec ps = prepare_spec(F, spec, Rng(seed).split("fixed-block"));
  return count_points_prepared(F, ps, budget);
}

inline std::uint64_t monte_carlo_hits(const PrimeField& F, const PreparedSpec& ps,
                                      std::uint64_t samples, std::uint64_t seed) {
  const std::size_t nfree = ps.free_pos.size();
  const std::uint64_t q = F.modulus();
  const std::size_t nchunks = 64;
  std::vector<std::uint64_t> hits(nchunks, 0);
  run_chunks(nchunks, [&](std::size_t chunk) {
    Rng rng = Rng(seed).split(chunk + 101);
    std::uint64_t len = samples / nchunks + (chunk < samples % nchunks ? 1 : 0);
    std::uint64_t a[codim_detail::kMaxH * codim_detail::kMaxW];
    std::uint64_t digits[64];
    std::uint64_t local = 0;
    for (std::uint64_t step = 0; step < len; ++step) {
      for (std::size_t t = 0; t < nfree; ++t) digits[t] = rng.below(q);
      ps.fill(a, digits);
      complete_matrix(F, ps, a);
      if (membership(F, ps.spec, a)) ++local;
    }
    hits[chunk] = local;
  });
  std::uint64_t acc = 0;
  for (auto v : hits) acc += v;
  return acc;
}

} // namespace mcm
