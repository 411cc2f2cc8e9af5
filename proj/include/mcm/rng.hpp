#pragma once

// Splittable deterministic RNG. Every piece of randomness in the library
// derives from one 64-bit seed, so runs replay bit-exactly regardless of
// worker count or platform (std distributions are implementation-defined
// and therefore banned here).

#include <cstdint>
#include <string_view>

namespace mcm {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    for (;;) {
      std::uint64_t v = next();
      if (v < limit) return v % n;
    }
  }

  // Child generator for an independent subtask. Distinct tags give
  // streams that never collide with the parent or each other.
  Rng split(std::uint64_t tag) const {
    std::uint64_t mix = state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL));
    Rng child(mix);
    child.next();
    return child;
  }

  Rng split(std::string_view tag) const {
    // FNV-1a over the tag, then split numerically.
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    return split(h);
  }

private:
  std::uint64_t state_;
};

} // namespace mcm
