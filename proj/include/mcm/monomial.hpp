#pragma once

// Monomials in z_0..z_N and the commuting differentials dz_0..dz_N.
// Total order: graded lexicographic, z-block before dz-block. The order is
// a monomial order (compatible with multiplication), which the exact
// division routine relies on.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mcm/errors.hpp"

namespace mcm {

struct Monomial {
  std::vector<std::int64_t> z;  // exponents of z_0..z_N
  std::vector<std::int64_t> dz; // exponents of dz_0..dz_N (empty or same length)

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : z(nvars, 0), dz(nvars, 0) {}

  static Monomial one(std::size_t nvars) { return Monomial(nvars); }

  static Monomial var(std::size_t nvars, std::size_t j, std::int64_t e = 1) {
    Monomial m(nvars);
    m.z[j] = e;
    return m;
  }

  static Monomial dvar(std::size_t nvars, std::size_t j, std::int64_t e = 1) {
    Monomial m(nvars);
    m.dz[j] = e;
    return m;
  }

  std::size_t nvars() const { return z.size(); }

  std::int64_t z_degree() const { return std::accumulate(z.begin(), z.end(), std::int64_t(0)); }
  std::int64_t dz_degree() const { return std::accumulate(dz.begin(), dz.end(), std::int64_t(0)); }
  std::int64_t total_degree() const { return z_degree() + dz_degree(); }

  Monomial operator*(const Monomial& o) const {
    if (o.nvars() != nvars()) throw ArityError("monomial variable counts differ");
    Monomial r(*this);
    for (std::size_t i = 0; i < z.size(); ++i) r.z[i] += o.z[i];
    for (std::size_t i = 0; i < dz.size(); ++i) r.dz[i] += o.dz[i];
    return r;
  }

  bool divides(const Monomial& o) const {
    if (o.nvars() != nvars()) return false;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] > o.z[i]) return false;
    for (std::size_t i = 0; i < dz.size(); ++i)
      if (dz[i] > o.dz[i]) return false;
    return true;
  }

  // o / this, assuming divisibility.
  Monomial quotient_of(const Monomial& o) const {
    Monomial r(o);
    for (std::size_t i = 0; i < z.size(); ++i) r.z[i] -= z[i];
    for (std::size_t i = 0; i < dz.size(); ++i) r.dz[i] -= dz[i];
    return r;
  }

  bool operator==(const Monomial& o) const { return z == o.z && dz == o.dz; }

  bool operator<(const Monomial& o) const {
    std::int64_t da = total_degree(), db = o.total_degree();
    if (da != db) return da < db;
    if (z != o.z) return z < o.z;
    return dz < o.dz;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] != 0) s += "*z" + std::to_string(i) + "^" + std::to_string(z[i]);
    for (std::size_t i = 0; i < dz.size(); ++i)
      if (dz[i] != 0) s += "*dz" + std::to_string(i) + "^" + std::to_string(dz[i]);
    return s;
  }
};

} // namespace mcm
