#pragma once

// Text round-trip for polynomials: `coeff*z0^a0*...*dz0^b0*...` terms
// joined by '+', descending canonical order (same order MultiPoly::str
// emits).

#include <string>
#include <vector>

#include "mcm/poly.hpp"

namespace mcm {

inline typename FpRing::Elem parse_elem(const FpRing& r, const std::string& s) {
  return r.from_int(std::stoll(s));
}
inline BigInt parse_elem(const BigIntRing&, const std::string& s) { return BigInt(s); }
inline BigRat parse_elem(const BigRatRing&, const std::string& s) { return BigRat(s); }

namespace detail {
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}
} // namespace detail

template <class R>
MultiPoly<R> parse_poly(const R& ring, std::size_t nvars, const std::string& text) {
  MultiPoly<R> p(ring, nvars);
  if (text.empty()) throw ParseError("empty polynomial text");
  for (const std::string& termtext : detail::split(text, '+')) {
    if (termtext == "0") continue;
    auto factors = detail::split(termtext, '*');
    if (factors.empty()) throw ParseError("empty term");
    Monomial m(nvars);
    typename R::Elem coeff = parse_elem(ring, factors[0]);
    for (std::size_t i = 1; i < factors.size(); ++i) {
      const std::string& f = factors[i];
      auto caret = f.find('^');
      if (caret == std::string::npos) throw ParseError("factor missing exponent: " + f);
      std::string name = f.substr(0, caret);
      std::int64_t e = std::stoll(f.substr(caret + 1));
      bool differential = name.rfind("dz", 0) == 0;
      std::size_t idx = std::stoull(name.substr(differential ? 2 : 1));
      if (idx >= nvars) throw ParseError("variable index out of range: " + f);
      if (differential) m.dz[idx] += e;
      else m.z[idx] += e;
    }
    p.add_term(m, coeff);
  }
  return p;
}

} // namespace mcm
