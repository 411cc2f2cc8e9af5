#pragma once

// Coefficient rings for the polynomial layer: F_q (q prime < 2^31),
// arbitrary-precision integers, arbitrary-precision rationals. Each ring
// models the same compile-time interface, so MultiPoly is a template.

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>

#include "mcm/fp.hpp"
#include "mcm/rng.hpp"

namespace mcm {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

struct BigIntRing {
  using Elem = BigInt;
  static constexpr const char* name = "integers";

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long long v) const { return v; }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  bool divide_exact(const Elem& a, const Elem& b, Elem& out) const {
    if (b == 0) return false;
    BigInt q = a / b, r = a % b;
    if (r != 0) return false;
    out = q;
    return true;
  }
  Elem random(Rng& rng) const { return static_cast<long long>(rng.below(2001)) - 1000; }
  std::string str(const Elem& a) const { return a.str(); }
};

struct BigRatRing {
  using Elem = BigRat;
  static constexpr const char* name = "rationals";

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(long long v) const { return v; }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  bool divide_exact(const Elem& a, const Elem& b, Elem& out) const {
    if (b == 0) return false;
    out = a / b;
    return true;
  }
  Elem random(Rng& rng) const {
    long long num = static_cast<long long>(rng.below(2001)) - 1000;
    long long den = 1 + static_cast<long long>(rng.below(20));
    return BigRat(num, den);
  }
  std::string str(const Elem& a) const {
    std::ostringstream os;
    os << a;
    return os.str();
  }
};

// F_q wrapper with the same interface as the big rings. Carries the field
// context by value (8 bytes).
struct FpRing {
  using Elem = std::uint64_t;
  static constexpr const char* name = "prime_field";

  PrimeField fp;

  explicit FpRing(std::uint64_t q) : fp(q) {}

  Elem zero() const { return 0; }
  Elem one() const { return fp.one(); }
  Elem from_int(long long v) const { return fp.from_int(v); }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }
  Elem add(Elem a, Elem b) const { return fp.add(a, b); }
  Elem sub(Elem a, Elem b) const { return fp.sub(a, b); }
  Elem neg(Elem a) const { return fp.neg(a); }
  Elem mul(Elem a, Elem b) const { return fp.mul(a, b); }
  bool divide_exact(Elem a, Elem b, Elem& out) const {
    if (b == 0) return false;
    out = fp.div(a, b);
    return true;
  }
  Elem random(Rng& rng) const { return fp.random(rng); }
  std::string str(Elem a) const { return std::to_string(a); }
};

inline bool same_ring(const BigIntRing&, const BigIntRing&) { return true; }
inline bool same_ring(const BigRatRing&, const BigRatRing&) { return true; }
inline bool same_ring(const FpRing& a, const FpRing& b) { return a.fp.modulus() == b.fp.modulus(); }

} // namespace mcm
