#pragma once

// Effective-bound arithmetic: closed forms for the exponent ladder, the
// degree-bound sweep, decomposition of large degrees into products, the
// very-ampleness threshold and moving-term counts. Everything exact.

#include <optional>
#include <utility>
#include <vector>

#include "mcm/schedule.hpp"

namespace mcm {

inline BigInt big_binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

inline BigInt big_pow(const BigInt& base, std::int64_t e) {
  BigInt r = 1, b = base;
  std::int64_t k = e;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

// Prefix sums S_{l,k} of a paper9 ladder row, via the closed form. Must
// agree with direct summation of mu; the acceptance suite checks both
// routes against each other.
inline BigInt closed_form_S(const MCMSchedule& s, std::int64_t l, std::int64_t k) {
  if (s.mode != ScheduleMode::paper9) throw ModeError("closed form defined for paper9 schedules");
  if (s.mu.find(l) == s.mu.end() || k < 0 || k > l) throw InvalidSelection("index out of range");
  const BigInt& dl = s.delta.at(l);
  BigInt P = big_pow(BigInt(l + 1), k + 1);
  // numerator of S * l^2
  BigInt num = (l * dl + 4 * l + 1) * l * (P - 1) - dl * (P + k - (k + 1) * (l + 1));
  BigInt l2 = BigInt(l) * l;
  BigInt q = num / l2;
  if (q * l2 != num) throw Error("closed form did not produce an integer");
  return q;
}

inline BigInt direct_S(const MCMSchedule& s, std::int64_t l, std::int64_t k) {
  const auto& row = s.mu.at(l);
  BigInt acc = 0;
  for (std::int64_t j = 0; j <= k; ++j) acc += row[j];
  return acc;
}

struct LadderGrowthCheck {
  std::int64_t l = 0;
  bool guaranteed = false; // the derivation covers l >= c+r+2 only
  bool holds = false;      // delta_{l+1} <= l^2 (l+1)^l delta_l, computed
};

struct DegreeBoundRow {
  std::int64_t N = 0;
  std::int64_t best_c = 0, best_r = 0;
  BigInt required_degree;      // min over (c, r) of (N+1) mu_{N,N}
  BigInt headline_bound;       // N^(ceil(N^2/2)) - 1
  bool within_headline = false;
  std::vector<LadderGrowthCheck> growth;   // for the minimizing (c, r)
  bool closed_form_agrees = false;         // closed form vs direct sums, all (l,k)
  bool replay_agrees = false;              // ladder recomputed through prefix sums
};

struct DegreeBoundReport {
  std::vector<DegreeBoundRow> rows;
  std::optional<std::int64_t> first_holding_N; // computed threshold of the sweep
};

inline std::vector<std::pair<std::int64_t, std::int64_t>> admissible_cr(std::int64_t N) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t c = 1; c <= N - 1; ++c)
    for (std::int64_t r = 0; c + r <= N - 1; ++r) {
      std::int64_t n = N - (c + r);
      if (2 * c + r >= N && n >= 1 && n <= c) out.emplace_back(c, r);
    }
  return out;
}

inline DegreeBoundReport degree_bound_report(std::int64_t Nmin, std::int64_t Nmax,
                                             std::int64_t heart = 1) {
  if (Nmin < 3) throw InvalidConfig("sweep starts at N = 3");
  DegreeBoundReport rep;
  for (std::int64_t N = Nmin; N <= Nmax; ++N) {
    DegreeBoundRow row;
    row.N = N;
    bool have = false;
    MCMSchedule best;
    for (auto [c, r] : admissible_cr(N)) {
      MCMConfig cfg;
      cfg.N = N;
      cfg.c = c;
      cfg.r = r;
      cfg.heart = heart;
      cfg.epsilons.assign(static_cast<std::size_t>(c + r), 1);
      MCMSchedule s = build_schedule(cfg, ScheduleMode::paper9);
      BigInt req = (N + 1) * s.mu.at(N)[N];
      if (!have || req < row.required_degree) {
        have = true;
        row.required_degree = req;
        row.best_c = c;
        row.best_r = r;
        best = s;
      }
    }
    row.headline_bound = big_pow(BigInt(N), (N * N + 1) / 2) - 1;
    row.within_headline = row.required_degree <= row.headline_bound;

    const std::int64_t cr = best.config.cr();
    for (std::int64_t l = cr + 1; l <= N; ++l) {
      LadderGrowthCheck g;
      g.l = l;
      g.guaranteed = l >= cr + 2;
      g.holds = best.delta.at(l + 1) <= BigInt(l) * l * big_pow(BigInt(l + 1), l) * best.delta.at(l);
      row.growth.push_back(g);
    }

    row.closed_form_agrees = true;
    for (std::int64_t l = cr + 1; l <= N; ++l)
      for (std::int64_t k = 0; k <= l; ++k)
        if (closed_form_S(best, l, k) != direct_S(best, l, k)) row.closed_form_agrees = false;

    // independent replay: rebuild the ladder through prefix sums only
    row.replay_agrees = true;
    {
      BigInt dl = 2;
      for (std::int64_t l = cr + 1; l <= N; ++l) {
        BigInt S = 0;
        for (std::int64_t k = 0; k <= l; ++k) {
          BigInt mu = l * S + (l - k) * dl + 4 * l + 1;
          if (mu != best.mu.at(l)[k]) row.replay_agrees = false;
          S += mu;
        }
        dl = l * best.mu.at(l)[l];
        if (dl != best.delta.at(l + 1)) row.replay_agrees = false;
      }
      if ((N + 1) * best.mu.at(N)[N] != best.d) row.replay_agrees = false;
    }

    if (row.within_headline && !rep.first_holding_N) rep.first_holding_N = N;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// Write d0 as p (d+1) + q (d+2) with p, q >= 0. Above the d^2 + d
// threshold the Euclidean construction always succeeds; below it a direct
// search decides. Empty optional means no decomposition exists.
inline std::optional<std::pair<BigInt, BigInt>> product_decompose(const BigInt& d,
                                                                  const BigInt& d0) {
  if (d < 1 || d0 < 0) throw InvalidConfig("need d >= 1 and d0 >= 0");
  if (d0 >= d * d + d) {
    BigInt p = d0 / (d + 1);
    BigInt q = d0 % (d + 1);
    return std::make_pair(p - q, q); // p >= q is forced above the threshold
  }
  for (BigInt q = 0; q * (d + 2) <= d0; ++q) {
    BigInt rem = d0 - q * (d + 2);
    if (rem % (d + 1) == 0) return std::make_pair(rem / (d + 1), q);
  }
  return std::nullopt;
}

inline BigInt very_ample_kappa(const std::vector<BigInt>& degrees_first_c,
                               const std::vector<BigInt>& degrees_all) {
  if (degrees_first_c.empty() || degrees_all.empty())
    throw InvalidConfig("degree lists must be nonempty");
  if (degrees_first_c.size() > degrees_all.size())
    throw InvalidConfig("first-c list longer than the full list");
  for (std::size_t i = 0; i < degrees_first_c.size(); ++i) {
    if (degrees_first_c[i] < 1 || degrees_all[i] < 1) throw InvalidConfig("degrees must be positive");
    if (degrees_first_c[i] != degrees_all[i])
      throw InvalidConfig("first-c degrees must prefix the full list");
  }
  for (std::size_t i = degrees_first_c.size(); i < degrees_all.size(); ++i)
    if (degrees_all[i] < 1) throw InvalidConfig("degrees must be positive");
  BigInt s = 0;
  for (const auto& v : degrees_first_c) s += v;
  for (const auto& v : degrees_all) s += v;
  return 16 * s * s;
}

// Least number of moving-coefficient term families needed at vanishing
// depth eta; zero when the codimension budget already suffices.
inline std::int64_t min_moving_terms(std::int64_t N, std::int64_t c, std::int64_t r,
                                     std::int64_t eta) {
  if (2 * c + r < N) throw InvalidConfig("need 2c + r >= N");
  if (eta < 0 || eta > N - (c + r) - 1) throw InvalidConfig("eta out of range");
  std::int64_t t = 3 * N - 2 * (2 * c + r) - 2 - 2 * eta;
  return t > 0 ? t + 1 : 0;
}

// Dimension count of the projectivized coefficient space of a full
// moving-coefficients system.
inline BigInt parameter_count(const MCMConfig& cfg) {
  cfg.validate();
  const std::int64_t N = cfg.N, cr = cfg.cr();
  BigInt bracket = N + 1;
  for (std::int64_t l = cr + 1; l <= N; ++l) bracket += big_binom(N + 1, l + 1) * (l + 1);
  BigInt coeffs = 0;
  for (auto e : cfg.epsilons) coeffs += big_binom(N + e, N);
  return bracket * coeffs;
}

} // namespace mcm
