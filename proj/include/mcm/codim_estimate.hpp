#pragma once

// Dimension estimation on top of the point counters, plus the structured
// checks around the rank families: Gaussian-elimination stratification,
// predicate equivalences, bordered-slice codimensions and the projection
// containment of the full base-locus family.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mcm/codim.hpp"

namespace mcm {

struct CountRecord {
  std::uint64_t q = 0;
  std::string method; // exhaustive | monte_carlo | skipped
  BigInt count = 0;   // exact, or the scaled estimate for monte carlo
  std::uint64_t samples = 0, hits = 0;
  double ci99_lo = 0, ci99_hi = 0; // on the count, monte carlo only
  std::string note;
  bool usable = false;
  double log_count = 0;
};

struct CodimEstimate {
  RankVarietySpec spec;
  std::int64_t ambient_dim = 0;
  std::int64_t expected_codim = 0;
  bool expected_is_bound_only = false;
  std::vector<CountRecord> counts;
  double fitted_dim = 0, fitted_codim = 0;
  std::optional<std::int64_t> rounded_codim;
  std::string verdict; // match | excess | deficit | inconclusive
};

struct EstimateOptions {
  BigInt budget = BigInt(1) << 30;
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 1;
  double band = 0.35;
  bool autoscale = true; // grow the sample count toward ~400 expected hits
};

inline CodimEstimate estimate_dimension(const RankVarietySpec& spec,
                                        const std::vector<std::uint64_t>& qs,
                                        const EstimateOptions& opt = {}) {
  spec.validate();
  CodimEstimate est;
  est.spec = spec;
  est.ambient_dim = spec.ambient_dim();
  est.expected_codim = spec.expected_codim();
  est.expected_is_bound_only = spec.expected_is_bound_only();

  for (std::uint64_t q : qs) {
    PrimeField F(q);
    PreparedSpec ps = prepare_spec(F, spec, Rng(opt.seed).split("fixed-block"));
    CountRecord rec;
    rec.q = q;
    const std::int64_t nfree = static_cast<std::int64_t>(ps.free_pos.size());
    BigInt space = big_pow(BigInt(static_cast<long long>(q)), nfree);
    // points of an X0-style pinned family live inside the slice; the
    // ambient the codimension refers to is still the full matrix space
    const std::int64_t pinned = est.ambient_dim - nfree;

    if (space <= opt.budget) {
      rec.method = "exhaustive";
      rec.count = count_points_prepared(F, ps, opt.budget);
      rec.usable = rec.count > 0;
      if (!rec.usable) rec.note = "empty point set";
      if (rec.usable) rec.log_count = std::log(rec.count.convert_to<double>());
    } else {
      // admissibility: the expected slice density must be reachable
      std::uint64_t samples = opt.samples;
      const std::int64_t slice_codim = est.expected_codim - pinned;
      if (opt.autoscale) {
        double want = 400.0 * std::pow(static_cast<double>(q), static_cast<double>(slice_codim));
        if (want > static_cast<double>(samples) && want < std::ldexp(1.0, 28))
          samples = static_cast<std::uint64_t>(want);
      }
      double reach = std::log(static_cast<double>(samples)) / std::log(static_cast<double>(q)) - 2.0;
      if (static_cast<double>(slice_codim) > reach) {
        rec.method = "skipped";
        rec.note = "expected density out of sampling reach";
        est.counts.push_back(rec);
        continue;
      }
      rec.method = "monte_carlo";
      rec.samples = samples;
      rec.hits = monte_carlo_hits(F, ps, samples, opt.seed ^ (q * 0x9e37u));
      if (rec.hits == 0) {
        rec.note = "no hits";
        est.counts.push_back(rec);
        continue;
      }
      double logscale = static_cast<double>(nfree) * std::log(static_cast<double>(q)) -
                        std::log(static_cast<double>(samples));
      rec.log_count = std::log(static_cast<double>(rec.hits)) + logscale;
      double sd = std::sqrt(static_cast<double>(rec.hits));
      rec.ci99_lo = std::exp(std::log(std::max(1.0, rec.hits - 2.576 * sd)) + logscale);
      rec.ci99_hi = std::exp(std::log(rec.hits + 2.576 * sd) + logscale);
      rec.count = BigInt(static_cast<long long>(std::llround(std::exp(rec.log_count))));
      rec.usable = true;
    }
    est.counts.push_back(rec);
  }

  // least-squares slope of log(count) against log(q)
  std::vector<std::pair<double, double>> pts;
  for (const auto& rec : est.counts)
    if (rec.usable) pts.emplace_back(std::log(static_cast<double>(rec.q)), rec.log_count);
  if (pts.size() < 2) {
    est.verdict = "inconclusive";
    return est;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  est.fitted_dim = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  est.fitted_codim = static_cast<double>(est.ambient_dim) - est.fitted_dim;
  double nearest = std::round(est.fitted_codim);
  if (std::abs(est.fitted_codim - nearest) > opt.band) {
    est.verdict = "inconclusive";
    return est;
  }
  est.rounded_codim = static_cast<std::int64_t>(nearest);
  if (*est.rounded_codim == est.expected_codim) est.verdict = "match";
  else if (*est.rounded_codim > est.expected_codim) est.verdict = "excess";
  else est.verdict = "deficit";
  return est;
}

// Bordered-slice codimensions: a fixed inner block of prescribed rank,
// free first row and column, counting matrices of rank <= j. Runs the
// count twice with independently drawn inner blocks to witness that the
// answer does not depend on the block.
struct SliceReport {
  CodimEstimate estimate;
  bool block_independent = false;
};

inline SliceReport slice_codim(std::int64_t p, std::int64_t rank_of_block, std::int64_t j,
                               const std::vector<std::uint64_t>& qs,
                               const EstimateOptions& opt = {}) {
  RankVarietySpec spec;
  spec.family = Family::JS;
  spec.p = p;
  spec.l = rank_of_block;
  spec.j = j;
  spec.validate();
  SliceReport rep;
  rep.estimate = estimate_dimension(spec, qs, opt);
  rep.block_independent = true;
  for (std::uint64_t q : qs) {
    PrimeField F(q);
    PreparedSpec a = prepare_spec(F, spec, Rng(opt.seed).split("fixed-block"));
    PreparedSpec b = prepare_spec(F, spec, Rng(opt.seed ^ 0x5bd1e995u).split("fixed-block"));
    BigInt ca = count_points_prepared(F, a, opt.budget);
    BigInt cb = count_points_prepared(F, b, opt.budget);
    if (ca != cb) rep.block_independent = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian-elimination stratification.

// Reduce a p x 2p matrix along the alpha_1 + beta_1 pivot: eliminate the
// first combined column below its head, then delete the first row and the
// columns of alpha_1, beta_1. Members of the rank family with nonzero
// pivot land in the one-size-smaller family.
inline FqMatrix gaussian_stratify(const PrimeField& F, const FqMatrix& X) {
  if (X.cols() != 2 * X.rows()) throw ShapeError("expected a p x 2p matrix");
  const std::size_t p = X.rows();
  std::uint64_t pivot = F.add(X.at(0, 0), X.at(0, p));
  if (pivot == 0) throw PivotRejected("alpha_11 + beta_11 vanishes");
  FqMatrix G(p, p);
  for (std::size_t i = 0; i < p; ++i) G.at(i, i) = 1;
  std::uint64_t inv = F.inv(pivot);
  for (std::size_t i = 1; i < p; ++i)
    G.at(i, 0) = F.neg(F.mul(F.add(X.at(i, 0), X.at(i, p)), inv));
  FqMatrix GX = fq_mul(F, G, X);
  FqMatrix out(p - 1, 2 * (p - 1));
  for (std::size_t i = 1; i < p; ++i)
    for (std::size_t j = 0; j < 2 * p; ++j) {
      if (j == 0 || j == p) continue;
      std::size_t jj = j < p ? j - 1 : j - 2;
      out.at(i - 1, jj) = GX.at(i, j);
    }
  return out;
}

// Structural identity of the combination patterns: the second-kind
// pattern matrix at (tau, rho), with its first column and rows 1, p+1
// deleted, is the pattern at (tau-1, rho-1) one size down.
inline FqMatrix combination_pattern(std::int64_t p, std::int64_t tau, std::int64_t rho) {
  // 2p x p; upper block identity; lower block: tau leading diagonal ones,
  // then ones at the tail of column rho. tau = 0 encodes the pulled-only
  // (first kind) pattern with rho = nu.
  FqMatrix I(static_cast<std::size_t>(2 * p), static_cast<std::size_t>(p));
  for (std::int64_t t = 0; t < p; ++t) I.at(static_cast<std::size_t>(t), static_cast<std::size_t>(t)) = 1;
  for (std::int64_t t = 0; t < tau; ++t)
    I.at(static_cast<std::size_t>(p + t), static_cast<std::size_t>(t)) = 1;
  for (std::int64_t t = tau; t < p; ++t)
    I.at(static_cast<std::size_t>(p + t), static_cast<std::size_t>(rho - 1)) = 1;
  return I;
}

inline bool pattern_reduction_identity(std::int64_t p) {
  for (std::int64_t tau = 1; tau <= p - 1; ++tau)
    for (std::int64_t rho = tau + 1; rho <= p; ++rho) {
      FqMatrix big = combination_pattern(p, tau, rho);
      FqMatrix small = combination_pattern(p - 1, tau - 1, rho - 1);
      FqMatrix cut(static_cast<std::size_t>(2 * (p - 1)), static_cast<std::size_t>(p - 1));
      for (std::size_t i = 0, ii = 0; i < big.rows(); ++i) {
        if (i == 0 || i == static_cast<std::size_t>(p)) continue;
        for (std::size_t j = 1; j < big.cols(); ++j) cut.at(ii, j - 1) = big.at(i, j);
        ++ii;
      }
      if (!(cut == small)) return false;
    }
  return true;
}

// Draw members of X(p, l) over F_q: low-rank alpha block by construction,
// the remaining conditions by rejection. Not uniform over the variety;
// used for universally-quantified containment checks only.
inline FqMatrix sample_member_X(const PrimeField& F, std::int64_t p, std::int64_t l, Rng& rng,
                                bool require_pivot, std::uint64_t max_tries = 2'000'000) {
  RankVarietySpec spec;
  spec.family = Family::X;
  spec.p = p;
  spec.l = l;
  const std::size_t pp = static_cast<std::size_t>(p);
  std::vector<std::uint64_t> flat(pp * 2 * pp, 0);
  for (std::uint64_t t = 0; t < max_tries; ++t) {
    FqMatrix alpha = l == 0 ? FqMatrix(pp, pp)
                            : fq_random_rank(F, pp, pp, static_cast<std::size_t>(rng.below(l + 1)), rng);
    for (std::size_t i = 0; i < pp; ++i)
      for (std::size_t j = 0; j < pp; ++j) {
        flat[i * 2 * pp + j] = alpha.at(i, j);
        flat[i * 2 * pp + pp + j] = F.random(rng);
      }
    if (require_pivot && F.add(flat[0], flat[pp]) == 0) continue;
    if (membership(F, spec, flat.data())) {
      FqMatrix out(pp, 2 * pp);
      for (std::size_t i = 0; i < pp; ++i)
        for (std::size_t j = 0; j < 2 * pp; ++j) out.at(i, j) = flat[i * 2 * pp + j];
      return out;
    }
  }
  throw SamplingFailed("no member of the rank family found");
}

struct StratifyReport {
  std::uint64_t samples = 0, contained = 0, pivot_rejections = 0;
  bool pattern_identity = true; // checked for all sizes up to pattern_max
  std::int64_t pattern_max = 6;
};

inline StratifyReport stratification_check(std::int64_t p, std::int64_t l, std::uint64_t q,
                                           std::uint64_t samples, std::uint64_t seed) {
  PrimeField F(q);
  StratifyReport rep;
  rep.samples = samples;
  RankVarietySpec down;
  down.family = Family::X;
  down.p = p - 1;
  down.l = l;
  Rng rng = Rng(seed).split("stratify");
  for (std::uint64_t s = 0; s < samples; ++s) {
    FqMatrix X = sample_member_X(F, p, l, rng, /*require_pivot=*/true);
    FqMatrix red = gaussian_stratify(F, X);
    if (membership(F, down, red)) ++rep.contained;
  }
  for (std::int64_t pp = 3; pp <= rep.pattern_max; ++pp)
    if (!pattern_reduction_identity(pp)) rep.pattern_identity = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Exhaustive predicate equivalences.

struct EquivalenceReport {
  BigInt checked = 0;
  BigInt mismatches = 0;
};

// Full-rank stratum of the top family equals the zero-column-sum locus
// with invertible alpha block.
inline EquivalenceReport equivalence_top_stratum(std::int64_t p, std::uint64_t q,
                                                 const BigInt& budget = BigInt(1) << 30) {
  PrimeField F(q);
  RankVarietySpec full, below;
  full.family = below.family = Family::X;
  full.p = below.p = p;
  full.l = p;
  below.l = p - 1;
  const std::size_t pp = static_cast<std::size_t>(p);
  const std::size_t E = 2 * pp * pp;
  BigInt space = big_pow(BigInt(static_cast<long long>(q)), static_cast<std::int64_t>(E));
  if (space > budget) throw BudgetExceeded("equivalence scan too large");
  const std::uint64_t total = static_cast<std::uint64_t>(space);

  const std::size_t nchunks = 64;
  std::vector<std::uint64_t> mism(nchunks, 0);
  run_chunks(nchunks, [&](std::size_t chunk) {
    std::uint64_t lo = total / nchunks * chunk + std::min<std::uint64_t>(chunk, total % nchunks);
    std::uint64_t len = total / nchunks + (chunk < total % nchunks ? 1 : 0);
    std::uint64_t a[codim_detail::kMaxH * codim_detail::kMaxW];
    std::uint64_t idx = lo;
    for (std::size_t t = 0; t < E; ++t) {
      a[t] = idx % q;
      idx /= q;
    }
    std::uint64_t local = 0;
    for (std::uint64_t step = 0; step < len; ++step) {
      bool lhs = membership(F, full, a) && !membership(F, below, a);
      // rhs: all 2p columns sum to zero and the alpha block is invertible
      bool sumzero = true;
      for (std::size_t i = 0; i < pp && sumzero; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < 2 * pp; ++j) acc = F.add(acc, a[i * 2 * pp + j]);
        if (acc != 0) sumzero = false;
      }
      bool rhs = false;
      if (sumzero) {
        codim_detail::Scratch s;
        for (std::size_t i = 0; i < pp; ++i)
          for (std::size_t j = 0; j < pp; ++j) s.buf[i * pp + j] = a[i * 2 * pp + j];
        rhs = codim_detail::rank_buf(F, s.buf, pp, pp) == pp;
      }
      if (lhs != rhs) ++local;
      for (std::size_t t = 0; t < E; ++t) {
        if (++a[t] < q) break;
        a[t] = 0;
      }
    }
    mism[chunk] = local;
  });
  EquivalenceReport rep;
  rep.checked = space;
  for (auto v : mism) rep.mismatches += static_cast<long long>(v);
  return rep;
}

// Vector form of the pulled-column rank conditions: all pulled variants
// stay degenerate iff either the extended family is degenerate, or the
// base is full rank and the pulled vector is the negated column sum.
inline EquivalenceReport equivalence_pulled_vector(std::int64_t p, std::uint64_t q,
                                                   const BigInt& budget = BigInt(1) << 30) {
  PrimeField F(q);
  const std::size_t pp = static_cast<std::size_t>(p);
  const std::size_t E = pp * (pp + 1); // p columns alpha plus one beta, height p
  BigInt space = big_pow(BigInt(static_cast<long long>(q)), static_cast<std::int64_t>(E));
  if (space > budget) throw BudgetExceeded("equivalence scan too large");
  const std::uint64_t total = static_cast<std::uint64_t>(space);

  const std::size_t nchunks = 64;
  std::vector<std::uint64_t> mism(nchunks, 0);
  run_chunks(nchunks, [&](std::size_t chunk) {
    std::uint64_t lo = total / nchunks * chunk + std::min<std::uint64_t>(chunk, total % nchunks);
    std::uint64_t len = total / nchunks + (chunk < total % nchunks ? 1 : 0);
    // layout: columns alpha_1..alpha_p then beta, row-major height pp
    std::uint64_t a[codim_detail::kMaxH * codim_detail::kMaxW];
    std::uint64_t idx = lo;
    for (std::size_t t = 0; t < E; ++t) {
      a[t] = idx % q;
      idx /= q;
    }
    codim_detail::Scratch s;
    std::uint64_t local = 0;
    const std::size_t w = pp + 1;
    for (std::uint64_t step = 0; step < len; ++step) {
      codim_detail::MatView m{a, pp, w};
      // lhs: for every nu, rank(alpha drop nu, alpha_nu + beta) <= p-1
      bool lhs = true;
      std::uint64_t beta[codim_detail::kMaxH];
      for (std::size_t i = 0; i < pp; ++i) beta[i] = m.at(i, pp);
      std::size_t cols[codim_detail::kMaxW];
      for (std::size_t t = 0; t < pp; ++t) cols[t] = t;
      for (std::size_t nu = 0; nu < pp && lhs; ++nu) {
        if (codim_detail::rank_of_columns(F, m, beta, cols, pp, nu, s) > pp - 1) lhs = false;
      }
      // rhs branch 1: rank(alpha, beta) <= p-1
      for (std::size_t t = 0; t < pp; ++t)
        for (std::size_t i = 0; i < pp; ++i) s.buf[i * w + t] = m.at(i, t);
      for (std::size_t i = 0; i < pp; ++i) s.buf[i * w + pp] = beta[i];
      bool rhs = codim_detail::rank_buf(F, s.buf, pp, w) <= pp - 1;
      if (!rhs) {
        // rhs branch 2: alpha full rank and sum(alpha) + beta = 0
        for (std::size_t t = 0; t < pp; ++t)
          for (std::size_t i = 0; i < pp; ++i) s.buf[i * pp + t] = m.at(i, t);
        if (codim_detail::rank_buf(F, s.buf, pp, pp) == pp) {
          bool zero = true;
          for (std::size_t i = 0; i < pp && zero; ++i) {
            std::uint64_t acc = beta[i];
            for (std::size_t t = 0; t < pp; ++t) acc = F.add(acc, m.at(i, t));
            if (acc != 0) zero = false;
          }
          rhs = zero;
        }
      }
      if (lhs != rhs) ++local;
      for (std::size_t t = 0; t < E; ++t) {
        if (++a[t] < q) break;
        a[t] = 0;
      }
    }
    mism[chunk] = local;
  });
  EquivalenceReport rep;
  rep.checked = space;
  for (auto v : mism) rep.mismatches += static_cast<long long>(v);
  return rep;
}

// ---------------------------------------------------------------------------
// Projection containment: members of the full base-locus family, with the
// first column pair dropped and rows truncated to the first N, land in
// the corank-one matrix family.

struct ProjectionReport {
  std::uint64_t members_found = 0;
  std::uint64_t contained = 0;
  std::uint64_t trials = 0;
};

inline ProjectionReport projection_containment(std::int64_t N, std::int64_t c, std::int64_t r,
                                               std::uint64_t q, std::uint64_t members_wanted,
                                               std::uint64_t seed,
                                               std::uint64_t max_trials = 50'000'000) {
  PrimeField F(q);
  RankVarietySpec mspec;
  mspec.family = Family::M;
  mspec.N = N;
  mspec.c = c;
  mspec.r = r;
  mspec.validate();
  RankVarietySpec xspec;
  xspec.family = Family::X;
  xspec.p = N;
  xspec.l = N - 1;

  const std::size_t h = mspec.height(), w = mspec.width();
  const std::size_t NN = static_cast<std::size_t>(N);
  std::vector<std::uint64_t> a(h * w);
  std::vector<std::uint64_t> proj(NN * 2 * NN);
  ProjectionReport rep;
  Rng rng = Rng(seed).split("projection");
  while (rep.members_found < members_wanted && rep.trials < max_trials) {
    ++rep.trials;
    // draw with the column-sum condition built in: last beta column derived
    for (std::size_t i = 0; i < h; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j + 1 < w; ++j) {
        a[i * w + j] = F.random(rng);
        acc = F.add(acc, a[i * w + j]);
      }
      a[i * w + w - 1] = F.neg(acc);
    }
    if (!membership(F, mspec, a.data())) continue;
    ++rep.members_found;
    const std::size_t np1 = NN + 1;
    for (std::size_t i = 0; i < NN; ++i)
      for (std::size_t j = 0; j < NN; ++j) {
        proj[i * 2 * NN + j] = a[i * w + (j + 1)];           // alpha_1..alpha_N
        proj[i * 2 * NN + NN + j] = a[i * w + np1 + (j + 1)]; // beta_1..beta_N
      }
    if (membership(F, xspec, proj.data())) ++rep.contained;
  }
  if (rep.members_found < members_wanted)
    throw SamplingFailed("too few members of the base-locus family found");
  return rep;
}

} // namespace mcm
