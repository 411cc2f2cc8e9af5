#pragma once

// Assembly of moving-coefficients hypersurface systems and the exact term
// regroupings used downstream: collapse of the inner moving families into
// the dominant columns, the first-kind (single pulled column) and
// second-kind (prefix plus pulled column) manipulations, and the
// vanishing-coordinate decomposition with residue extraction. Every
// rewriting is an exact polynomial identity; reassembly is checked by an
// independent auditor.

#include <map>
#include <vector>

#include "mcm/poly.hpp"
#include "mcm/schedule.hpp"

namespace mcm {

struct MovingKey {
  std::vector<std::int64_t> support; // ascending coordinates, size l+1
  std::int64_t k = 0;                // index of the distinguished coordinate

  std::int64_t level() const { return static_cast<std::int64_t>(support.size()) - 1; }
  std::int64_t distinguished() const { return support[static_cast<std::size_t>(k)]; }

  bool operator<(const MovingKey& o) const {
    if (support != o.support) return support < o.support;
    return k < o.k;
  }
};

template <class R>
struct HypersurfaceSystem {
  R ring;
  MCMConfig config;
  MCMSchedule schedule;
  std::uint64_t seed = 0;
  bool zero_moving = false;

  // coefficient blocks, one row per equation
  std::vector<std::vector<MultiPoly<R>>> A;        // A[i][j]
  std::vector<std::map<MovingKey, MultiPoly<R>>> M; // M[i][key]
  std::vector<MultiPoly<R>> F;                      // assembled equations

  std::size_t nvars() const { return static_cast<std::size_t>(config.N + 1); }

  std::int64_t d64() const { return static_cast<std::int64_t>(schedule.d); }
  std::int64_t mu64(std::int64_t l, std::int64_t k) const {
    return static_cast<std::int64_t>(schedule.mu.at(l).at(static_cast<std::size_t>(k)));
  }
  std::int64_t delta64(std::int64_t l) const {
    return static_cast<std::int64_t>(schedule.delta.at(l));
  }

  // z-power pattern of a moving term family
  Monomial moving_monomial(const MovingKey& key) const {
    const std::int64_t l = key.level();
    const std::int64_t mu = mu64(l, key.k);
    Monomial m(nvars());
    for (std::size_t t = 0; t < key.support.size(); ++t) {
      std::size_t coord = static_cast<std::size_t>(key.support[t]);
      m.z[coord] = (static_cast<std::int64_t>(t) == key.k) ? d64() - l * mu : mu;
    }
    return m;
  }
};

struct SampleOptions {
  bool zero_moving = false;
  bool allow_small_char = false;
};

namespace detail {
inline void check_char(const FpRing& ring, const BigInt& d, bool allow) {
  if (!allow && BigInt(ring.fp.modulus()) <= d)
    throw CharacteristicTooSmall("field characteristic does not exceed the dominant degree");
}
inline void check_char(const BigIntRing&, const BigInt&, bool) {}
inline void check_char(const BigRatRing&, const BigInt&, bool) {}

inline void all_supports(std::int64_t N, std::int64_t l,
                         std::vector<std::vector<std::int64_t>>& out) {
  std::vector<std::int64_t> pick(static_cast<std::size_t>(l + 1));
  auto rec = [&](auto&& self, std::int64_t pos, std::int64_t start) -> void {
    if (pos == l + 1) {
      out.push_back(pick);
      return;
    }
    for (std::int64_t v = start; v <= N; ++v) {
      pick[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, v + 1);
    }
  };
  rec(rec, 0, 0);
}
} // namespace detail

template <class R>
HypersurfaceSystem<R> sample_system(const MCMSchedule& schedule, const R& ring,
                                    std::uint64_t seed, SampleOptions opts = {}) {
  if (!schedule.fits_int64())
    throw InvalidConfig("schedule exponents too large to drive a polynomial system");
  detail::check_char(ring, schedule.d, opts.allow_small_char);

  HypersurfaceSystem<R> sys{ring, schedule.config, schedule, seed, opts.zero_moving, {}, {}, {}};
  const std::int64_t N = schedule.config.N, cr = schedule.config.cr();
  const std::size_t nv = sys.nvars();
  Rng root(seed);

  std::vector<std::vector<std::vector<std::int64_t>>> supports_by_level(
      static_cast<std::size_t>(N + 1));
  for (std::int64_t l = cr + 1; l <= N; ++l)
    detail::all_supports(N, l, supports_by_level[static_cast<std::size_t>(l)]);

  for (std::int64_t i = 0; i < cr; ++i) {
    Rng row = root.split(static_cast<std::uint64_t>(i));
    const std::int64_t eps = schedule.config.epsilons[static_cast<std::size_t>(i)];
    std::vector<MultiPoly<R>> Ai;
    for (std::int64_t j = 0; j <= N; ++j)
      Ai.push_back(random_homogeneous(ring, nv, eps, row));
    std::map<MovingKey, MultiPoly<R>> Mi;
    for (std::int64_t l = cr + 1; l <= N; ++l)
      for (const auto& supp : supports_by_level[static_cast<std::size_t>(l)])
        for (std::int64_t k = 0; k <= l; ++k) {
          MovingKey key{supp, k};
          Mi.emplace(key, opts.zero_moving ? MultiPoly<R>::zero(ring, nv)
                                           : random_homogeneous(ring, nv, eps, row));
        }

    MultiPoly<R> Fi(ring, nv);
    for (std::int64_t j = 0; j <= N; ++j)
      Fi = Fi + Ai[static_cast<std::size_t>(j)].times_monomial(
                    Monomial::var(nv, static_cast<std::size_t>(j), sys.d64()));
    for (const auto& [key, coeff] : Mi)
      Fi = Fi + coeff.times_monomial(sys.moving_monomial(key));

    sys.A.push_back(std::move(Ai));
    sys.M.push_back(std::move(Mi));
    sys.F.push_back(std::move(Fi));
  }
  return sys;
}

// One column of a rewritten equation system: a per-equation polynomial
// block times a shared monomial factor.
template <class R>
struct RwColumn {
  enum class Role { dominant, moving, residue };
  Role role = Role::dominant;
  std::int64_t coord = -1; // carrying coordinate for dominant/residue columns
  std::int64_t lambda = 0; // factor exponent when the factor is a pure power
  Monomial factor;
  std::vector<MultiPoly<R>> block; // indexed by equation
};

template <class R>
struct RewrittenSystem {
  Variant variant;
  MCMConfig config;
  std::vector<RwColumn<R>> columns;

  std::vector<std::size_t> dominant_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < columns.size(); ++t)
      if (columns[t].role == RwColumn<R>::Role::dominant) out.push_back(t);
    return out;
  }
};

namespace detail {

// Gathered full terms that collapse into the dominant column of coordinate
// j at the given level: the Fermat term plus every strictly-inner moving
// term distinguished at j whose support stays inside `allowed`.
template <class R>
MultiPoly<R> gather_dominant(const HypersurfaceSystem<R>& sys, std::size_t i, std::int64_t j,
                             std::int64_t level, const std::vector<std::int64_t>& allowed) {
  const std::size_t nv = sys.nvars();
  MultiPoly<R> g = sys.A[i][static_cast<std::size_t>(j)].times_monomial(
      Monomial::var(nv, static_cast<std::size_t>(j), sys.d64()));
  for (const auto& [key, coeff] : sys.M[i]) {
    if (key.level() >= level) continue;
    if (key.distinguished() != j) continue;
    bool inside = true;
    for (auto s : key.support)
      if (!std::binary_search(allowed.begin(), allowed.end(), s)) inside = false;
    if (!inside) continue;
    g = g + coeff.times_monomial(sys.moving_monomial(key));
  }
  return g;
}

} // namespace detail

// Core rewriting driver. Handles all four public variants uniformly: the
// vanishing set splits off residue columns, the survivors collapse to
// dominant columns plus the top-level moving family, and the sub-variant
// then redistributes the top-level family.
template <class R>
RewrittenSystem<R> rewrite(const HypersurfaceSystem<R>& sys, const Variant& variant) {
  check_variant(sys.config, variant);
  const std::int64_t N = sys.config.N, cr = sys.config.cr();
  const std::size_t nv = sys.nvars();
  const std::int64_t eta = variant.eta();
  const std::int64_t m = N - eta; // level of the surviving core

  std::vector<std::int64_t> rset;
  for (std::int64_t j = 0; j <= N; ++j)
    if (!std::binary_search(variant.vanishing.begin(), variant.vanishing.end(), j))
      rset.push_back(j);

  RewrittenSystem<R> rw;
  rw.variant = variant;
  rw.config = sys.config;

  // residues: everything touching a vanishing coordinate, grouped by the
  // smallest vanishing coordinate in its support, divided by its square
  std::vector<RwColumn<R>> residues;
  for (auto v : variant.vanishing) {
    RwColumn<R> col;
    col.role = RwColumn<R>::Role::residue;
    col.coord = v;
    col.lambda = 2;
    col.factor = Monomial::var(nv, static_cast<std::size_t>(v), 2);
    for (std::size_t i = 0; i < sys.F.size(); ++i) {
      MultiPoly<R> g = sys.A[i][static_cast<std::size_t>(v)].times_monomial(
          Monomial::var(nv, static_cast<std::size_t>(v), sys.d64()));
      for (const auto& [key, coeff] : sys.M[i]) {
        std::int64_t mv = -1;
        for (auto s : key.support)
          if (std::binary_search(variant.vanishing.begin(), variant.vanishing.end(), s)) {
            mv = s;
            break;
          }
        if (mv != v) continue;
        g = g + coeff.times_monomial(sys.moving_monomial(key));
      }
      col.block.push_back(g.exact_divide_monomial(col.factor));
    }
    residues.push_back(std::move(col));
  }

  // collapsed dominant columns of the core
  const std::int64_t delta_m = sys.delta64(m);
  std::vector<RwColumn<R>> dominant;
  for (std::int64_t pos = 0; pos <= m; ++pos) {
    const std::int64_t j = rset[static_cast<std::size_t>(pos)];
    RwColumn<R> col;
    col.role = RwColumn<R>::Role::dominant;
    col.coord = j;
    col.lambda = sys.d64() - delta_m;
    col.factor = Monomial::var(nv, static_cast<std::size_t>(j), col.lambda);
    for (std::size_t i = 0; i < sys.F.size(); ++i)
      col.block.push_back(
          detail::gather_dominant(sys, i, j, m, rset).exact_divide_monomial(col.factor));
    dominant.push_back(std::move(col));
  }

  // the top-level moving family of the core
  std::vector<MovingKey> top_keys;
  for (std::int64_t k = 0; k <= m; ++k) top_keys.push_back(MovingKey{rset, k});
  auto moving_term = [&](std::size_t i, std::int64_t k) {
    const auto& key = top_keys[static_cast<std::size_t>(k)];
    return sys.M[i].at(key).times_monomial(sys.moving_monomial(key));
  };

  switch (variant.kind) {
  case ManipKind::collapse: {
    for (auto& col : dominant) rw.columns.push_back(std::move(col));
    for (std::int64_t k = 0; k <= m; ++k) {
      const auto& key = top_keys[static_cast<std::size_t>(k)];
      RwColumn<R> col;
      col.role = RwColumn<R>::Role::moving;
      col.coord = key.distinguished();
      col.factor = sys.moving_monomial(key);
      for (std::size_t i = 0; i < sys.F.size(); ++i) col.block.push_back(sys.M[i].at(key));
      rw.columns.push_back(std::move(col));
    }
    break;
  }
  case ManipKind::first: {
    const std::int64_t nu = variant.nu;
    const std::int64_t j = rset[static_cast<std::size_t>(nu)];
    RwColumn<R> pulled;
    pulled.role = RwColumn<R>::Role::dominant;
    pulled.coord = j;
    pulled.lambda = sys.mu64(m, 0);
    pulled.factor = Monomial::var(nv, static_cast<std::size_t>(j), pulled.lambda);
    for (std::size_t i = 0; i < sys.F.size(); ++i) {
      MultiPoly<R> g =
          dominant[static_cast<std::size_t>(nu)].block[i].times_monomial(
              dominant[static_cast<std::size_t>(nu)].factor);
      for (std::int64_t k = 0; k <= m; ++k) g = g + moving_term(i, k);
      pulled.block.push_back(g.exact_divide_monomial(pulled.factor));
    }
    for (std::int64_t pos = 0; pos <= m; ++pos) {
      if (pos == nu) rw.columns.push_back(pulled);
      else rw.columns.push_back(dominant[static_cast<std::size_t>(pos)]);
    }
    break;
  }
  case ManipKind::second: {
    const std::int64_t tau = variant.tau, rho = variant.rho;
    std::vector<RwColumn<R>> cols;
    for (std::int64_t pos = 0; pos <= m; ++pos) {
      const std::int64_t j = rset[static_cast<std::size_t>(pos)];
      RwColumn<R> col;
      col.role = RwColumn<R>::Role::dominant;
      col.coord = j;
      if (pos <= tau) {
        col.lambda = sys.d64() - m * sys.mu64(m, pos);
        col.factor = Monomial::var(nv, static_cast<std::size_t>(j), col.lambda);
        for (std::size_t i = 0; i < sys.F.size(); ++i) {
          MultiPoly<R> g = dominant[static_cast<std::size_t>(pos)].block[i].times_monomial(
              dominant[static_cast<std::size_t>(pos)].factor);
          g = g + moving_term(i, pos);
          col.block.push_back(g.exact_divide_monomial(col.factor));
        }
      } else if (pos == rho) {
        col.lambda = sys.mu64(m, tau + 1);
        col.factor = Monomial::var(nv, static_cast<std::size_t>(j), col.lambda);
        for (std::size_t i = 0; i < sys.F.size(); ++i) {
          MultiPoly<R> g = dominant[static_cast<std::size_t>(rho)].block[i].times_monomial(
              dominant[static_cast<std::size_t>(rho)].factor);
          for (std::int64_t k = tau + 1; k <= m; ++k) g = g + moving_term(i, k);
          col.block.push_back(g.exact_divide_monomial(col.factor));
        }
      } else {
        col = dominant[static_cast<std::size_t>(pos)];
      }
      cols.push_back(std::move(col));
    }
    for (auto& col : cols) rw.columns.push_back(std::move(col));
    break;
  }
  }

  for (auto& col : residues) rw.columns.push_back(std::move(col));
  return rw;
}

// Convenience wrappers matching the operation names used elsewhere.
template <class R>
RewrittenSystem<R> collapse(const HypersurfaceSystem<R>& sys) {
  Variant v;
  v.kind = ManipKind::collapse;
  return rewrite(sys, v);
}

template <class R>
RewrittenSystem<R> rewrite_first_kind(const HypersurfaceSystem<R>& sys, std::int64_t nu,
                                      std::vector<std::int64_t> vanishing = {}) {
  Variant v;
  v.kind = ManipKind::first;
  v.nu = nu;
  v.vanishing = std::move(vanishing);
  return rewrite(sys, v);
}

template <class R>
RewrittenSystem<R> rewrite_second_kind(const HypersurfaceSystem<R>& sys, std::int64_t tau,
                                       std::int64_t rho,
                                       std::vector<std::int64_t> vanishing = {}) {
  Variant v;
  v.kind = ManipKind::second;
  v.tau = tau;
  v.rho = rho;
  v.vanishing = std::move(vanishing);
  return rewrite(sys, v);
}

template <class R>
RewrittenSystem<R> vanish_decompose(const HypersurfaceSystem<R>& sys,
                                    std::vector<std::int64_t> vanishing, const Variant& sub) {
  if (vanishing.empty()) throw InvalidSelection("vanishing set must be nonempty here");
  Variant v = sub;
  v.vanishing = std::move(vanishing);
  return rewrite(sys, v);
}

template <class R>
struct RewriteAudit {
  bool exact = true;
  std::vector<MultiPoly<R>> residuals; // per equation
};

// Independent reassembly: sum every column against its factor and compare
// with the stored equation.
template <class R>
RewriteAudit<R> verify_rewrite(const HypersurfaceSystem<R>& sys, const RewrittenSystem<R>& rw) {
  RewriteAudit<R> audit;
  for (std::size_t i = 0; i < sys.F.size(); ++i) {
    MultiPoly<R> acc(sys.ring, sys.nvars());
    for (const auto& col : rw.columns) acc = acc + col.block[i].times_monomial(col.factor);
    MultiPoly<R> res = acc - sys.F[i];
    if (!res.is_zero()) audit.exact = false;
    audit.residuals.push_back(std::move(res));
  }
  return audit;
}

// Reduced-family equation shapes (fewer moving families, squared tails).
// Only well-formedness is checked for these; the exponent selection that
// would make their twists negative is not part of this tool.
template <class R>
std::vector<MultiPoly<R>> improved_equations(const MCMSchedule& schedule, const R& ring,
                                             std::uint64_t seed) {
  const MCMConfig& cfg = schedule.config;
  const std::int64_t N = cfg.N, cr = cfg.cr();
  const std::int64_t t = 3 * N - 2 * (2 * cfg.c + cfg.r) - 2;
  if (t <= 0) throw InvalidConfig("no moving families needed for this shape");
  const bool even = (t % 2) == 0;
  const std::int64_t p = even ? t / 2 : (t - 1) / 2;
  if (!schedule.fits_int64()) throw InvalidConfig("schedule exponents too large");
  const std::size_t nv = static_cast<std::size_t>(N + 1);
  const std::int64_t d = static_cast<std::int64_t>(schedule.d);

  Rng root(seed);
  std::vector<MultiPoly<R>> out;
  for (std::int64_t i = 0; i < cr; ++i) {
    Rng row = root.split(static_cast<std::uint64_t>(i) + 7000);
    const std::int64_t eps = cfg.epsilons[static_cast<std::size_t>(i)];
    MultiPoly<R> Fi(ring, nv);
    for (std::int64_t j = 0; j <= N; ++j)
      Fi = Fi + random_homogeneous(ring, nv, eps, row)
                    .times_monomial(Monomial::var(nv, static_cast<std::size_t>(j), d));
    const std::int64_t depth_max = even ? p - 1 : p;
    for (std::int64_t depth = 0; depth <= depth_max; ++depth) {
      const std::int64_t width = even ? 2 * p - 2 * depth : 2 * p + 1 - 2 * depth;
      const std::int64_t tail_shift = even ? 2 * (N + depth - 2 * p) : 2 * (N + depth - 2 * p - 1);
      std::vector<std::vector<std::int64_t>> supports;
      detail::all_supports(N, N - depth, supports);
      for (const auto& supp : supports)
        for (std::int64_t k = 0; k <= width; ++k) {
          const std::int64_t mu =
              static_cast<std::int64_t>(schedule.mu.at(N - depth).at(static_cast<std::size_t>(k)));
          const std::int64_t lead = d - width * mu - tail_shift;
          if (mu < 2 || lead < 2) throw InvalidConfig("improved shape exponents degenerate");
          Monomial mono(nv);
          for (std::size_t tpos = 0; tpos < supp.size(); ++tpos) {
            const std::size_t coord = static_cast<std::size_t>(supp[tpos]);
            const std::int64_t ti = static_cast<std::int64_t>(tpos);
            if (ti == k) mono.z[coord] = lead;
            else if (ti <= width) mono.z[coord] = mu;
            else mono.z[coord] = 2;
          }
          Fi = Fi + random_homogeneous(ring, nv, eps, row).times_monomial(mono);
        }
    }
    out.push_back(std::move(Fi));
  }
  return out;
}

} // namespace mcm
