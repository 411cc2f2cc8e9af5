#pragma once

// Pointed sampling over F_q: choose the jet point first, then solve the
// linear conditions this point imposes on the coefficient blocks and
// randomize the kernel. Every emitted pair satisfies its constraints
// exactly. Optionally the sampler can steer the evaluated term columns
// onto a prescribed target (used to manufacture base-locus members).

#include <optional>
#include <vector>

#include "mcm/hypersurfaces.hpp"
#include "mcm/linalg.hpp"
#include "mcm/symforms.hpp"

namespace mcm {

struct SampleSpec {
  bool on_cone = true; // F_i(z) = 0 for every equation
  bool jet = true;     // dF_j(z, xi) = 0 for j <= c
  std::vector<std::int64_t> zero_coords; // ascending; all others drawn nonzero
  // when set: per-column targets for the collapsed term matrix at the
  // core level m = N - |zero_coords|; row layout: c+r values then c
  // differentials, columns: m+1 dominant then m+1 moving
  std::optional<FqMatrix> witness;
};

struct PointedSample {
  HypersurfaceSystem<FpRing> system;
  JetPoint jet;
};

class PointedSampler {
public:
  PointedSampler(const MCMSchedule& schedule, std::uint64_t q, std::uint64_t seed,
                 SampleSpec spec = {})
      : schedule_(schedule), ring_(q), seed_(seed), spec_(std::move(spec)) {
    schedule_.config.validate();
    if (!schedule_.fits_int64()) throw InvalidConfig("schedule exponents too large");
    if (BigInt(q) <= schedule_.d)
      throw CharacteristicTooSmall("sampling field must exceed the dominant degree");
    const std::int64_t N = schedule_.config.N;
    for (std::size_t t = 0; t < spec_.zero_coords.size(); ++t) {
      if (spec_.zero_coords[t] < 0 || spec_.zero_coords[t] > N)
        throw InvalidSelection("pinned coordinate out of range");
      if (t > 0 && spec_.zero_coords[t] <= spec_.zero_coords[t - 1])
        throw InvalidSelection("pinned coordinates must strictly ascend");
    }
    build_unknown_layout();
  }

  const FpRing& ring() const { return ring_; }

  PointedSample draw(std::uint64_t index) const {
    Rng rng = Rng(seed_).split(index);
    const PrimeField& F = ring_.fp;
    const std::int64_t N = schedule_.config.N;
    const std::size_t nv = static_cast<std::size_t>(N + 1);

    JetPoint jet;
    jet.z.assign(nv, 0);
    for (std::size_t j = 0; j < nv; ++j)
      if (!pinned(static_cast<std::int64_t>(j))) jet.z[j] = F.random_nonzero(rng);
    for (int tries = 0;; ++tries) {
      if (tries > 200) throw SamplingFailed("no independent direction found");
      jet.xi.assign(nv, 0);
      for (std::size_t j = 0; j < nv; ++j) jet.xi[j] = F.random(rng);
      FqMatrix pair(2, nv);
      for (std::size_t j = 0; j < nv; ++j) {
        pair.at(0, j) = jet.z[j];
        pair.at(1, j) = jet.xi[j];
      }
      if (fq_rank(F, pair) == 2) break;
    }

    HypersurfaceSystem<FpRing> sys{ring_, schedule_.config, schedule_, seed_, false, {}, {}, {}};
    const std::int64_t cr = schedule_.config.cr(), c = schedule_.config.c;
    for (std::int64_t i = 0; i < cr; ++i) {
      auto coeffs = solve_equation(static_cast<std::size_t>(i), jet, rng);
      instantiate_row(sys, static_cast<std::size_t>(i), coeffs);
    }
    (void)c;
    return PointedSample{std::move(sys), std::move(jet)};
  }

private:
  struct Unknown {
    bool is_moving = false;
    std::int64_t coord = -1; // A-block coordinate
    std::size_t key_index = 0;
    std::size_t basis_index = 0;
    Monomial full; // basis monomial times the block's term monomial
    // witness column this unknown feeds, or -1 when unconstrained there
    std::int64_t witness_col = -1;
  };

  bool pinned(std::int64_t j) const {
    return std::binary_search(spec_.zero_coords.begin(), spec_.zero_coords.end(), j);
  }

  void build_unknown_layout() {
    const std::int64_t N = schedule_.config.N, cr = schedule_.config.cr();
    const std::size_t nv = static_cast<std::size_t>(N + 1);
    keys_.clear();
    for (std::int64_t l = cr + 1; l <= N; ++l) {
      std::vector<std::vector<std::int64_t>> supports;
      detail::all_supports(N, l, supports);
      for (const auto& s : supports)
        for (std::int64_t k = 0; k <= l; ++k) keys_.push_back(MovingKey{s, k});
    }

    // basis monomials per distinct epsilon
    const std::int64_t eta = static_cast<std::int64_t>(spec_.zero_coords.size());
    const std::int64_t m = N - eta;
    std::vector<std::int64_t> rset;
    for (std::int64_t j = 0; j <= N; ++j)
      if (!pinned(j)) rset.push_back(j);
    auto rpos = [&](std::int64_t coord) {
      auto it = std::lower_bound(rset.begin(), rset.end(), coord);
      return static_cast<std::int64_t>(it - rset.begin());
    };

    unknowns_by_eps_.clear();
    for (std::size_t i = 0; i < schedule_.config.epsilons.size(); ++i) {
      std::int64_t eps = schedule_.config.epsilons[i];
      if (unknowns_by_eps_.count(eps)) continue;
      std::vector<Monomial> basis;
      {
        std::vector<std::int64_t> expo(nv, 0);
        auto rec = [&](auto&& self, std::size_t pos, std::int64_t left) -> void {
          if (pos + 1 == nv) {
            expo[pos] = left;
            Monomial mo(nv);
            mo.z = expo;
            basis.push_back(mo);
            return;
          }
          for (std::int64_t e = 0; e <= left; ++e) {
            expo[pos] = e;
            self(self, pos + 1, left - e);
          }
        };
        rec(rec, 0, eps);
      }

      HypersurfaceSystem<FpRing> shape{ring_, schedule_.config, schedule_, 0, false, {}, {}, {}};
      std::vector<Unknown> list;
      for (std::int64_t j = 0; j <= N; ++j) {
        Monomial termmono = Monomial::var(nv, static_cast<std::size_t>(j),
                                          static_cast<std::int64_t>(schedule_.d));
        for (std::size_t b = 0; b < basis.size(); ++b) {
          Unknown u;
          u.is_moving = false;
          u.coord = j;
          u.basis_index = b;
          u.full = basis[b] * termmono;
          u.witness_col = pinned(j) ? -1 : rpos(j);
          list.push_back(std::move(u));
        }
      }
      for (std::size_t kidx = 0; kidx < keys_.size(); ++kidx) {
        const MovingKey& key = keys_[kidx];
        Monomial termmono = shape.moving_monomial(key);
        bool touches_pinned = false;
        for (auto s : key.support)
          if (pinned(s)) touches_pinned = true;
        std::int64_t wcol = -1;
        if (!touches_pinned) {
          if (key.level() == m) wcol = (m + 1) + key.k; // top moving column
          else wcol = rpos(key.distinguished());        // collapses into a dominant column
        }
        for (std::size_t b = 0; b < basis.size(); ++b) {
          Unknown u;
          u.is_moving = true;
          u.key_index = kidx;
          u.basis_index = b;
          u.full = basis[b] * termmono;
          u.witness_col = wcol;
          list.push_back(std::move(u));
        }
      }
      unknowns_by_eps_.emplace(eps, std::move(list));
      basis_by_eps_.emplace(eps, std::move(basis));
    }
  }

  // value and directional-derivative evaluation of a monomial at the jet
  std::uint64_t mono_value(const Monomial& m, const JetPoint& jet) const {
    const PrimeField& F = ring_.fp;
    std::uint64_t v = F.one();
    for (std::size_t j = 0; j < m.z.size(); ++j) {
      if (m.z[j] == 0) continue;
      if (jet.z[j] == 0) return 0;
      v = F.mul(v, F.pow(jet.z[j], static_cast<std::uint64_t>(m.z[j])));
    }
    return v;
  }

  std::uint64_t mono_derivative(const Monomial& m, const JetPoint& jet) const {
    const PrimeField& F = ring_.fp;
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < m.z.size(); ++j) {
      if (m.z[j] == 0) continue;
      std::uint64_t t = F.from_int(static_cast<long long>(m.z[j] % static_cast<std::int64_t>(F.modulus())));
      if (t == 0 || jet.xi[j] == 0) continue;
      t = F.mul(t, jet.xi[j]);
      bool zero = false;
      for (std::size_t k = 0; k < m.z.size(); ++k) {
        std::int64_t e = m.z[k] - (k == j ? 1 : 0);
        if (e == 0) continue;
        if (jet.z[k] == 0) { zero = true; break; }
        t = F.mul(t, F.pow(jet.z[k], static_cast<std::uint64_t>(e)));
      }
      if (!zero) acc = F.add(acc, t);
    }
    return acc;
  }

  std::vector<std::uint64_t> solve_equation(std::size_t i, const JetPoint& jet, Rng& rng) const {
    const PrimeField& F = ring_.fp;
    const std::int64_t c = schedule_.config.c;
    const std::int64_t eps = schedule_.config.epsilons[i];
    const auto& unknowns = unknowns_by_eps_.at(eps);
    const bool has_diff = static_cast<std::int64_t>(i) < c;

    std::vector<std::uint64_t> vals(unknowns.size()), ders(unknowns.size(), 0);
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      vals[u] = mono_value(unknowns[u].full, jet);
      if (has_diff) ders[u] = mono_derivative(unknowns[u].full, jet);
    }

    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<std::uint64_t> rhs;
    if (spec_.witness) {
      const FqMatrix& W = *spec_.witness;
      const std::size_t wcols = W.cols();
      for (std::size_t col = 0; col < wcols; ++col) {
        std::vector<std::uint64_t> vrow(unknowns.size(), 0), drow(unknowns.size(), 0);
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
          if (unknowns[u].witness_col != static_cast<std::int64_t>(col)) continue;
          vrow[u] = vals[u];
          drow[u] = ders[u];
        }
        rows.push_back(std::move(vrow));
        rhs.push_back(W.at(i, col));
        if (has_diff) {
          rows.push_back(std::move(drow));
          rhs.push_back(W.at(schedule_.config.cr() + i, col));
        }
      }
    } else {
      if (spec_.on_cone) {
        rows.push_back(vals);
        rhs.push_back(0);
      }
      if (spec_.jet && has_diff) {
        rows.push_back(ders);
        rhs.push_back(0);
      }
    }

    if (rows.empty()) {
      std::vector<std::uint64_t> out(unknowns.size());
      for (auto& v : out) v = F.random(rng);
      return out;
    }
    FqMatrix A(rows.size(), unknowns.size());
    for (std::size_t rr = 0; rr < rows.size(); ++rr)
      for (std::size_t u = 0; u < unknowns.size(); ++u) A.at(rr, u) = rows[rr][u];
    std::vector<std::uint64_t> out;
    if (!fq_solve_random(F, A, rhs, rng, out))
      throw SamplingFailed("constraints on the coefficient blocks are inconsistent");
    return out;
  }

  void instantiate_row(HypersurfaceSystem<FpRing>& sys, std::size_t i,
                       const std::vector<std::uint64_t>& coeffs) const {
    const std::int64_t N = schedule_.config.N;
    const std::size_t nv = static_cast<std::size_t>(N + 1);
    const std::int64_t eps = schedule_.config.epsilons[i];
    const auto& unknowns = unknowns_by_eps_.at(eps);
    const auto& basis = basis_by_eps_.at(eps);

    std::vector<MultiPoly<FpRing>> Ai(static_cast<std::size_t>(N + 1),
                                      MultiPoly<FpRing>::zero(ring_, nv));
    std::map<MovingKey, MultiPoly<FpRing>> Mi;
    for (const auto& key : keys_) Mi.emplace(key, MultiPoly<FpRing>::zero(ring_, nv));

    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      if (coeffs[u] == 0) continue;
      const Unknown& uk = unknowns[u];
      if (uk.is_moving)
        Mi.at(keys_[uk.key_index]).add_term(basis[uk.basis_index], coeffs[u]);
      else
        Ai[static_cast<std::size_t>(uk.coord)].add_term(basis[uk.basis_index], coeffs[u]);
    }

    MultiPoly<FpRing> Fi(ring_, nv);
    for (std::int64_t j = 0; j <= N; ++j)
      Fi = Fi + Ai[static_cast<std::size_t>(j)].times_monomial(
                    Monomial::var(nv, static_cast<std::size_t>(j), sys.d64()));
    for (const auto& [key, coeff] : Mi)
      Fi = Fi + coeff.times_monomial(sys.moving_monomial(key));
    sys.A.push_back(std::move(Ai));
    sys.M.push_back(std::move(Mi));
    sys.F.push_back(std::move(Fi));
  }

  MCMSchedule schedule_;
  FpRing ring_;
  std::uint64_t seed_;
  SampleSpec spec_;
  std::vector<MovingKey> keys_;
  std::map<std::int64_t, std::vector<Unknown>> unknowns_by_eps_;
  std::map<std::int64_t, std::vector<Monomial>> basis_by_eps_;
};

} // namespace mcm
