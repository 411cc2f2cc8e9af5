#pragma once

// Exponent selection for moving-coefficients hypersurface systems. A
// schedule fixes the ladder integers delta_l, the moving exponents
// mu_{l,k} and the dominant degree d. Three construction modes:
//
//   tight  - the selection inequalities taken at equality (smallest
//            exponents the constraints allow),
//   paper9 - the simplified equalities used by the effective-bound
//            arithmetic (delta start pinned to 2, growth slack absorbed),
//   mock   - smallest exponents that keep every rewriting division exact
//            (the "structural" subset), used where the full-strength
//            exponents are too large to carry in polynomial degrees.
//
// All arithmetic is arbitrary precision; nothing here overflows.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcm/errors.hpp"
#include "mcm/ring.hpp"

namespace mcm {

struct MCMConfig {
  std::int64_t N = 0;
  std::int64_t c = 0;
  std::int64_t r = 0;
  std::int64_t heart = 1;
  std::vector<std::int64_t> epsilons; // one per hypersurface, c+r of them

  std::int64_t cr() const { return c + r; }
  std::int64_t n() const { return N - (c + r); }

  void validate() const {
    if (N < 2) throw InvalidConfig("N must be at least 2");
    if (c < 0 || r < 0) throw InvalidConfig("c, r must be nonnegative");
    if (2 * c + r < N) throw InvalidConfig("need 2c + r >= N");
    if (c + r > N - 1) throw InvalidConfig("need c + r <= N - 1");
    if (static_cast<std::int64_t>(epsilons.size()) != c + r)
      throw InvalidConfig("need exactly c + r epsilon degrees");
    for (auto e : epsilons)
      if (e < 1) throw InvalidConfig("every epsilon must be >= 1");
    std::int64_t nn = n();
    if (nn < 1 || nn > c) throw InvalidConfig("derived n = N - (c+r) must satisfy 1 <= n <= c");
    if (heart < 1) throw InvalidConfig("heart must be a positive integer");
  }

  std::int64_t max_epsilon() const {
    std::int64_t m = 0;
    for (auto e : epsilons) m = std::max(m, e);
    return m;
  }
};

enum class ScheduleMode { tight, paper9, mock };

inline const char* mode_name(ScheduleMode m) {
  switch (m) {
  case ScheduleMode::tight: return "tight";
  case ScheduleMode::paper9: return "paper9";
  case ScheduleMode::mock: return "mock";
  }
  return "?";
}

inline ScheduleMode mode_from_name(const std::string& s) {
  if (s == "tight") return ScheduleMode::tight;
  if (s == "paper9") return ScheduleMode::paper9;
  if (s == "mock") return ScheduleMode::mock;
  throw InvalidConfig("unknown schedule mode: " + s);
}

struct MCMSchedule {
  MCMConfig config;
  ScheduleMode mode = ScheduleMode::tight;
  // delta[l] defined for l = c+r+1 .. N+1, mu[l] (length l+1) for l = c+r+1 .. N
  std::map<std::int64_t, BigInt> delta;
  std::map<std::int64_t, std::vector<BigInt>> mu;
  BigInt d;

  const BigInt& mu_at(std::int64_t l, std::int64_t k) const { return mu.at(l).at(k); }
  BigInt deg_f(std::size_t i) const { return d + config.epsilons.at(i); }

  // true when every exponent fits in int64, i.e. the schedule can drive an
  // actual polynomial system
  bool fits_int64() const {
    const BigInt lim = BigInt(std::int64_t(1) << 62);
    if (d >= lim) return false;
    for (const auto& [l, row] : mu)
      for (const auto& v : row)
        if (v >= lim) return false;
    return true;
  }
};

namespace detail {
inline BigInt ceil_div(const BigInt& a, const BigInt& b) { return (a + b - 1) / b; }
}

inline MCMSchedule build_schedule(const MCMConfig& config, ScheduleMode mode) {
  config.validate();
  MCMSchedule s;
  s.config = config;
  s.mode = mode;
  const std::int64_t cr = config.cr(), N = config.N;

  BigInt delta0;
  switch (mode) {
  case ScheduleMode::tight: delta0 = config.max_epsilon(); break;
  case ScheduleMode::paper9: delta0 = 2; break;
  case ScheduleMode::mock: delta0 = std::max<std::int64_t>(2, config.max_epsilon()); break;
  }
  s.delta[cr + 1] = delta0;

  for (std::int64_t l = cr + 1; l <= N; ++l) {
    const BigInt& dl = s.delta[l];
    std::vector<BigInt> row(l + 1);
    for (std::int64_t k = 0; k <= l; ++k) {
      switch (mode) {
      case ScheduleMode::tight: {
        BigInt v = (l - k) * dl + l * (delta0 + 1) + 1 + (l - cr) * BigInt(config.heart);
        for (std::int64_t j = 0; j < k; ++j) v += l * row[j];
        row[k] = v;
        break;
      }
      case ScheduleMode::paper9: {
        BigInt v = (l - k) * dl + 4 * l + 1;
        for (std::int64_t j = 0; j < k; ++j) v += l * row[j];
        row[k] = v;
        break;
      }
      case ScheduleMode::mock: {
        if (k == 0) {
          BigInt v = detail::ceil_div(dl, BigInt(l));
          row[0] = v < 2 ? BigInt(2) : v;
        } else {
          row[k] = row[k - 1] + 1;
        }
        break;
      }
      }
    }
    s.mu[l] = row;
    s.delta[l + 1] = l * row[l];
  }

  if (mode == ScheduleMode::mock) {
    // smallest d making every manipulation divisible at every core level
    BigInt d = 0;
    for (std::int64_t m = cr + 1; m <= N; ++m) {
      const auto& row = s.mu[m];
      BigInt a = row[0] + m * row[m] + 2;
      BigInt b = (m + 1) * row[m] + 2;
      BigInt cdt = s.delta[m] + row[0];
      d = std::max({d, a, b, cdt});
    }
    s.d = d;
  } else {
    s.d = (N + 1) * s.mu[N][N];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Validators. "full" re-checks the Algorithm's inequality chain; "structural"
// checks only what exactness of the rewritings needs (divisibility margins
// and exponents >= 2). Both return the list of violated constraints.

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_structural(const MCMSchedule& s) {
  ValidationReport rep;
  const auto& c = s.config;
  const std::int64_t cr = c.cr(), N = c.N;
  auto fail = [&](const std::string& m) { rep.violations.push_back(m); };

  for (std::int64_t l = cr + 1; l <= N; ++l) {
    const auto& row = s.mu.at(l);
    for (std::int64_t k = 0; k <= l; ++k) {
      if (row[k] < 2) fail("exponent mu[" + std::to_string(l) + "][" + std::to_string(k) + "] below 2");
      if (s.d - l * row[k] < 2)
        fail("dominant-degree margin d - l*mu too small at l=" + std::to_string(l));
      if (k > 0 && row[k] <= row[k - 1])
        fail("mu row not strictly increasing at l=" + std::to_string(l));
    }
    // every manipulation level m: inner terms must collapse below delta_m,
    // and the pulled-out factor must divide every associated term
    if (BigInt(l) * row[0] < s.delta.at(l))
      fail("second-kind division margin delta <= l*mu0 fails at l=" + std::to_string(l));
    if (row[0] > s.d - s.delta.at(l))
      fail("first-kind division margin mu0 <= d - delta fails at l=" + std::to_string(l));
    for (std::int64_t k = 0; k <= l; ++k)
      if (row[0] > s.d - l * row[k])
        fail("first-kind division margin mu0 <= d - l*mu fails at l=" + std::to_string(l));
    for (std::int64_t k = 0; k <= l; ++k)
      for (std::int64_t j = k; j <= l; ++j)
        if (row[k] + l * row[j] > s.d)
          fail("second-kind division margin mu_k + l*mu_j <= d fails at l=" + std::to_string(l));
    for (std::int64_t inner = cr + 1; inner < l; ++inner)
      for (const auto& v : s.mu.at(inner))
        if (BigInt(inner) * v > s.delta.at(l))
          fail("collapse margin inner*mu <= delta fails at level " + std::to_string(l));
  }
  return rep;
}

inline ValidationReport validate_full(const MCMSchedule& s) {
  ValidationReport rep = validate_structural(s);
  const auto& c = s.config;
  const std::int64_t cr = c.cr(), N = c.N;
  auto fail = [&](const std::string& m) { rep.violations.push_back(m); };

  const BigInt& delta0 = s.delta.at(cr + 1);
  if (delta0 < c.max_epsilon()) fail("delta start below max epsilon");
  for (std::int64_t l = cr + 1; l <= N; ++l) {
    const auto& row = s.mu.at(l);
    const BigInt& dl = s.delta.at(l);
    for (std::int64_t k = 0; k <= l; ++k) {
      BigInt lower = (l - k) * dl + l * (delta0 + 1) + 1 + (l - cr) * BigInt(c.heart);
      for (std::int64_t j = 0; j < k; ++j) lower += l * row[j];
      if (row[k] < lower)
        fail("selection lower bound fails at mu[" + std::to_string(l) + "][" + std::to_string(k) + "]");
    }
    if (s.delta.at(l + 1) != l * row[l]) fail("delta chain broken at l=" + std::to_string(l));
  }
  if (s.d < (N + 1) * s.mu.at(N)[N]) fail("dominant degree below (N+1)*mu[N][N]");
  // cross-level separation
  for (std::int64_t l1 = cr + 1; l1 < N; ++l1)
    for (std::int64_t l2 = l1 + 1; l2 <= N; ++l2)
      if (s.mu.at(l1)[l1] >= s.mu.at(l2)[0])
        fail("level separation fails between l=" + std::to_string(l1) + " and l=" + std::to_string(l2));
  return rep;
}

// ---------------------------------------------------------------------------
// Twist degrees.

enum class ManipKind { collapse, first, second };

struct Variant {
  ManipKind kind = ManipKind::first;
  std::int64_t nu = 0;          // first kind
  std::int64_t tau = 0, rho = 1; // second kind
  std::vector<std::int64_t> vanishing; // strictly ascending coordinates set to zero

  std::int64_t eta() const { return static_cast<std::int64_t>(vanishing.size()); }

  std::string str() const {
    std::string s;
    if (!vanishing.empty()) {
      s += "v(";
      for (std::size_t i = 0; i < vanishing.size(); ++i)
        s += (i ? "," : "") + std::to_string(vanishing[i]);
      s += ")";
    }
    switch (kind) {
    case ManipKind::collapse: s += "collapse"; break;
    case ManipKind::first: s += "first(" + std::to_string(nu) + ")"; break;
    case ManipKind::second:
      s += "second(" + std::to_string(tau) + "," + std::to_string(rho) + ")";
      break;
    }
    return s;
  }
};

inline void check_variant(const MCMConfig& c, const Variant& v) {
  const std::int64_t eta = v.eta();
  if (eta > 0) {
    if (eta > c.n() - 1) throw InvalidSelection("too many vanishing coordinates");
    for (std::size_t i = 0; i < v.vanishing.size(); ++i) {
      if (v.vanishing[i] < 0 || v.vanishing[i] > c.N)
        throw InvalidSelection("vanishing coordinate out of range");
      if (i > 0 && v.vanishing[i] <= v.vanishing[i - 1])
        throw InvalidSelection("vanishing coordinates must strictly ascend");
    }
  }
  const std::int64_t m = c.N - eta;
  switch (v.kind) {
  case ManipKind::collapse: break;
  case ManipKind::first:
    if (v.nu < 0 || v.nu > m) throw InvalidSelection("nu out of range");
    break;
  case ManipKind::second:
    if (v.tau < 0 || v.tau > m - 1) throw InvalidSelection("tau out of range");
    if (v.rho < v.tau + 1 || v.rho > m) throw InvalidSelection("rho out of range");
    break;
  }
}

// Per-column exponents of the rewritten equations, indexed by position
// 0..N-eta over the surviving coordinates in ascending order.
inline std::vector<BigInt> lambda_profile(const MCMSchedule& s, const Variant& v) {
  check_variant(s.config, v);
  const std::int64_t m = s.config.N - v.eta();
  const BigInt& dm = s.delta.at(m);
  const auto& row = s.mu.at(m);
  std::vector<BigInt> lam(m + 1, s.d - dm);
  switch (v.kind) {
  case ManipKind::collapse:
    break; // dominant columns only; moving columns handled separately
  case ManipKind::first:
    lam[v.nu] = row[0];
    break;
  case ManipKind::second:
    for (std::int64_t k = 0; k <= v.tau; ++k) lam[k] = s.d - m * row[k];
    lam[v.rho] = row[v.tau + 1];
    break;
  }
  return lam;
}

struct TwistDegree {
  BigInt value;
  Variant variant;
  std::vector<std::int64_t> rows_i; // 1-based value-row selection
  std::vector<std::int64_t> rows_j; // 1-based differential-row selection
};

// Scaling exponent of the glued determinant form: sum of the selected
// equation degrees minus the column exponents, plus (ambient columns).
inline BigInt twist_from_profile(const std::vector<BigInt>& deg_f_i,
                                 const std::vector<BigInt>& deg_f_j,
                                 const std::vector<BigInt>& lambda) {
  BigInt v = 0;
  for (const auto& x : deg_f_i) v += x;
  for (const auto& x : deg_f_j) v += x;
  for (const auto& x : lambda) v -= x;
  v += static_cast<std::int64_t>(lambda.size());
  return v;
}

inline TwistDegree twist_degree(const MCMSchedule& s, const Variant& v,
                                const std::vector<std::int64_t>& rows_i,
                                const std::vector<std::int64_t>& rows_j) {
  const auto& c = s.config;
  check_variant(c, v);
  if (v.kind == ManipKind::collapse)
    throw InvalidSelection("twist degrees attach to first/second-kind variants");
  const std::int64_t m = c.N - v.eta();
  if (static_cast<std::int64_t>(rows_i.size() + rows_j.size()) != m)
    throw InvalidSelection("row selection sizes must add up to the column count minus one");
  if (rows_i.size() < rows_j.size()) throw InvalidSelection("value rows must dominate");
  auto check_rows = [&](const std::vector<std::int64_t>& rows, std::int64_t hi) {
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t] < 1 || rows[t] > hi) throw InvalidSelection("row index out of range");
      if (t > 0 && rows[t] <= rows[t - 1]) throw InvalidSelection("row selection must ascend");
    }
  };
  check_rows(rows_i, c.cr());
  check_rows(rows_j, c.c);
  for (auto j : rows_j)
    if (std::find(rows_i.begin(), rows_i.end(), j) == rows_i.end())
      throw InvalidSelection("differential rows must be among the selected value rows");

  std::vector<BigInt> di, dj;
  for (auto i : rows_i) di.push_back(s.deg_f(static_cast<std::size_t>(i - 1)));
  for (auto j : rows_j) dj.push_back(s.deg_f(static_cast<std::size_t>(j - 1)));
  TwistDegree t;
  t.value = twist_from_profile(di, dj, lambda_profile(s, v));
  t.variant = v;
  t.rows_i = rows_i;
  t.rows_j = rows_j;
  return t;
}

// Every first/second-kind variant at every vanishing depth, with the
// default full row selection (all value rows, differential rows chosen
// among 1..c).
template <class F>
void for_each_variant(const MCMConfig& c, F&& f) {
  const std::int64_t n = c.n();
  std::vector<std::vector<std::int64_t>> vsets;
  for (std::int64_t eta = 0; eta <= n - 1; ++eta) {
    // all ascending eta-subsets of 0..N
    std::vector<std::int64_t> pick(eta);
    auto rec = [&](auto&& self, std::int64_t pos, std::int64_t start) -> void {
      if (pos == eta) {
        vsets.push_back(pick);
        return;
      }
      for (std::int64_t v = start; v <= c.N; ++v) {
        pick[pos] = v;
        self(self, pos + 1, v + 1);
      }
    };
    rec(rec, 0, 0);
  }
  for (const auto& vs : vsets) {
    const std::int64_t m = c.N - static_cast<std::int64_t>(vs.size());
    for (std::int64_t nu = 0; nu <= m; ++nu) {
      Variant v;
      v.kind = ManipKind::first;
      v.nu = nu;
      v.vanishing = vs;
      f(v);
    }
    for (std::int64_t tau = 0; tau <= m - 1; ++tau)
      for (std::int64_t rho = tau + 1; rho <= m; ++rho) {
        Variant v;
        v.kind = ManipKind::second;
        v.tau = tau;
        v.rho = rho;
        v.vanishing = vs;
        f(v);
      }
  }
}

} // namespace mcm
