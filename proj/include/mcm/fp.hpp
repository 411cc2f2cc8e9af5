#pragma once

// Prime field F_q arithmetic for q < 2^31, plus a Miller-Rabin primality
// check (deterministic for 64-bit inputs). Elements are plain uint64_t in
// [0, q); all operations go through a PrimeField context.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mcm/rng.hpp"

namespace mcm {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

} // namespace detail

// Deterministic Miller-Rabin for n < 2^64.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod_u64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < s - 1; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

class PrimeField {
public:
  using Elem = std::uint64_t;

  explicit PrimeField(std::uint64_t q) : q_(q) {
    if (q >= (1ULL << 31)) throw std::invalid_argument("prime field modulus must be < 2^31");
    if (!is_prime_u64(q)) throw std::invalid_argument("prime field modulus is not prime");
  }

  std::uint64_t modulus() const { return q_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1 % q_; }
  Elem from_int(long long v) const {
    long long r = v % static_cast<long long>(q_);
    if (r < 0) r += static_cast<long long>(q_);
    return static_cast<Elem>(r);
  }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= q_ ? s - q_ : s; }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }
  Elem mul(Elem a, Elem b) const { return (a * b) % q_; } // q < 2^31 so no overflow
  Elem pow(Elem a, std::uint64_t e) const { return detail::powmod_u64(a, e, q_); }

  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("division by zero in prime field");
    return pow(a, q_ - 2);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem random(Rng& rng) const { return rng.below(q_); }
  Elem random_nonzero(Rng& rng) const { return 1 + rng.below(q_ - 1); }

  // a^e with a signed (possibly huge) exponent; uses x^(q-1) = 1 for x != 0.
  Elem pow_signed(Elem a, long long e) const {
    if (a == 0) {
      if (e < 0) throw std::domain_error("0 to a negative power");
      return e == 0 ? one() : 0;
    }
    long long m = static_cast<long long>(q_ - 1);
    long long r = e % m;
    if (r < 0) r += m;
    return pow(a, static_cast<std::uint64_t>(r));
  }

private:
  std::uint64_t q_;
};

} // namespace mcm
