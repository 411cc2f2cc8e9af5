#pragma once

// Sparse multivariate polynomials over a coefficient ring, with formal
// differentials in commuting dz variables. Terms live in a std::map keyed
// by the graded-lex monomial order, so iteration (and hence serialization
// and every fold over terms) is deterministic.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcm/errors.hpp"
#include "mcm/monomial.hpp"
#include "mcm/ring.hpp"

namespace mcm {

template <class R>
class MultiPoly {
public:
  using Elem = typename R::Elem;

  MultiPoly(const R& ring, std::size_t nvars) : ring_(ring), nvars_(nvars) {}

  static MultiPoly zero(const R& ring, std::size_t nvars) { return MultiPoly(ring, nvars); }

  static MultiPoly constant(const R& ring, std::size_t nvars, const Elem& c) {
    MultiPoly p(ring, nvars);
    p.add_term(Monomial::one(nvars), c);
    return p;
  }

  static MultiPoly variable(const R& ring, std::size_t nvars, std::size_t j) {
    MultiPoly p(ring, nvars);
    p.add_term(Monomial::var(nvars, j), ring.one());
    return p;
  }

  static MultiPoly dvariable(const R& ring, std::size_t nvars, std::size_t j) {
    MultiPoly p(ring, nvars);
    p.add_term(Monomial::dvar(nvars, j), ring.one());
    return p;
  }

  static MultiPoly term(const R& ring, const Monomial& m, const Elem& c) {
    MultiPoly p(ring, m.nvars());
    p.add_term(m, c);
    return p;
  }

  const R& ring() const { return ring_; }
  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, Elem>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Monomial& m, const Elem& c) {
    if (m.nvars() != nvars_) throw ArityError("term arity does not match polynomial");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (!ring_.is_zero(c)) terms_.emplace(m, c);
    } else {
      it->second = ring_.add(it->second, c);
      if (ring_.is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiPoly operator+(const MultiPoly& o) const {
    check_compatible(o);
    MultiPoly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }

  MultiPoly operator-(const MultiPoly& o) const {
    check_compatible(o);
    MultiPoly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, ring_.neg(c));
    return r;
  }

  MultiPoly operator-() const {
    MultiPoly r(ring_, nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, ring_.neg(c));
    return r;
  }

  MultiPoly operator*(const MultiPoly& o) const {
    check_compatible(o);
    MultiPoly r(ring_, nvars_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ring_.mul(ca, cb));
    return r;
  }

  MultiPoly scaled(const Elem& c) const {
    MultiPoly r(ring_, nvars_);
    if (ring_.is_zero(c)) return r;
    for (const auto& [m, cc] : terms_) {
      Elem v = ring_.mul(cc, c);
      if (!ring_.is_zero(v)) r.terms_.emplace(m, v);
    }
    return r;
  }

  MultiPoly times_monomial(const Monomial& f) const {
    MultiPoly r(ring_, nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m * f, c);
    return r;
  }

  bool operator==(const MultiPoly& o) const {
    if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    for (; a != terms_.end(); ++a, ++b) {
      if (!(a->first == b->first) || !ring_.eq(a->second, b->second)) return false;
    }
    return true;
  }

  // Exact division: *this must be a multiple of d. Works by peeling the
  // leading term, which strictly decreases in the monomial order, so the
  // loop terminates; any non-divisible leading term means the quotient
  // does not exist and signals a broken rewriting identity upstream.
  MultiPoly exact_divide(const MultiPoly& d) const {
    check_compatible(d);
    if (d.is_zero()) throw DivisionNotExact("division by zero polynomial");
    MultiPoly q(ring_, nvars_);
    MultiPoly rem(*this);
    const auto& dl = *d.terms_.rbegin();
    while (!rem.is_zero()) {
      const auto& rl = *rem.terms_.rbegin();
      if (!dl.first.divides(rl.first)) throw DivisionNotExact("leading monomial not divisible");
      Elem cq;
      if (!ring_.divide_exact(rl.second, dl.second, cq))
        throw DivisionNotExact("leading coefficient not divisible");
      Monomial mq = dl.first.quotient_of(rl.first);
      MultiPoly t = MultiPoly::term(ring_, mq, cq);
      q = q + t;
      rem = rem - t * d;
    }
    return q;
  }

  // Quotient by a single monomial, erroring unless every term is divisible.
  MultiPoly exact_divide_monomial(const Monomial& f) const {
    MultiPoly r(ring_, nvars_);
    for (const auto& [m, c] : terms_) {
      if (!f.divides(m)) throw DivisionNotExact("monomial factor missing from term");
      r.terms_.emplace(f.quotient_of(m), c);
    }
    return r;
  }

  std::int64_t dz_degree_max() const {
    std::int64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.dz_degree());
    return d;
  }

  // Uniform dz-degree across terms (the symmetric-form grade); zero
  // polynomial reports grade 0.
  std::optional<std::int64_t> form_degree() const {
    std::optional<std::int64_t> g;
    for (const auto& [m, c] : terms_) {
      std::int64_t d = m.dz_degree();
      if (!g) g = d;
      else if (*g != d) return std::nullopt;
    }
    return g ? g : std::optional<std::int64_t>(0);
  }

  // Uniform total (z + dz) degree; empty optional when inhomogeneous.
  // The zero polynomial is homogeneous of every degree.
  std::optional<std::int64_t> homogeneous_degree() const {
    std::optional<std::int64_t> g;
    for (const auto& [m, c] : terms_) {
      std::int64_t d = m.total_degree();
      if (!g) g = d;
      else if (*g != d) return std::nullopt;
    }
    return g ? g : std::optional<std::int64_t>(0);
  }

  bool is_homogeneous_of(std::int64_t deg) const {
    if (terms_.empty()) return true;
    auto g = homogeneous_degree();
    return g && *g == deg;
  }

  // d applied to a dz-free polynomial; the result has grade 1.
  MultiPoly differential() const {
    if (dz_degree_max() != 0) throw InvalidGrade("differential of an already form-graded value");
    MultiPoly r(ring_, nvars_);
    for (const auto& [m, c] : terms_) {
      for (std::size_t j = 0; j < nvars_; ++j) {
        if (m.z[j] == 0) continue;
        Elem cc = ring_.mul(c, ring_.from_int(static_cast<long long>(m.z[j])));
        if (ring_.is_zero(cc)) continue;
        Monomial mm(m);
        mm.z[j] -= 1;
        mm.dz[j] += 1;
        r.add_term(mm, cc);
      }
    }
    return r;
  }

  // Substitute dz_j := z_j (radial contraction of a form).
  MultiPoly contract_dz() const {
    MultiPoly r(ring_, nvars_);
    for (const auto& [m, c] : terms_) {
      Monomial mm(nvars_);
      for (std::size_t j = 0; j < nvars_; ++j) mm.z[j] = m.z[j] + m.dz[j];
      r.add_term(mm, c);
    }
    return r;
  }

  // dP contracted along z, minus deg(P)*P; identically zero on homogeneous
  // input, which the caller-facing contract checks.
  MultiPoly euler_residual() const {
    auto g = homogeneous_degree();
    if (!g) throw NotHomogeneous("euler residual needs homogeneous input");
    if (dz_degree_max() != 0) throw InvalidGrade("euler residual of a form-graded value");
    MultiPoly lhs = differential().contract_dz();
    Elem gg = ring_.from_int(static_cast<long long>(*g));
    return lhs - scaled(gg);
  }

  Elem pow_elem(const Elem& base, std::int64_t e) const {
    Elem r = ring_.one();
    Elem b = base;
    std::uint64_t k = static_cast<std::uint64_t>(e);
    while (k) {
      if (k & 1) r = ring_.mul(r, b);
      b = ring_.mul(b, b);
      k >>= 1;
    }
    return r;
  }

  Elem evaluate(const std::vector<Elem>& z, const std::vector<Elem>* xi = nullptr) const {
    if (z.size() != nvars_) throw ArityError("point arity mismatch");
    bool graded = dz_degree_max() > 0;
    if (graded && (xi == nullptr || xi->size() != nvars_))
      throw ArityError("form evaluation needs a direction of matching arity");
    Elem acc = ring_.zero();
    for (const auto& [m, c] : terms_) {
      Elem t = c;
      for (std::size_t j = 0; j < nvars_; ++j) {
        if (m.z[j]) t = ring_.mul(t, pow_elem(z[j], m.z[j]));
        if (m.dz[j]) t = ring_.mul(t, pow_elem((*xi)[j], m.dz[j]));
      }
      acc = ring_.add(acc, t);
    }
    return acc;
  }

  // Canonical text form: terms in descending monomial order, joined by '+'.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!s.empty()) s += "+";
      s += ring_.str(it->second) + it->first.str();
    }
    return s;
  }

private:
  void check_compatible(const MultiPoly& o) const {
    if (!same_ring(ring_, o.ring_)) throw RingMismatch("operands live in different rings");
    if (nvars_ != o.nvars_) throw RingMismatch("operands have different variable counts");
  }

  R ring_;
  std::size_t nvars_;
  std::map<Monomial, Elem> terms_;
};

// A symmetric horizontal differential form: polynomial in (z, dz) whose
// every monomial carries dz-degree exactly m.
template <class R>
struct SymForm {
  MultiPoly<R> poly;
  std::int64_t degree = 0; // form degree m

  SymForm(MultiPoly<R> p, std::int64_t m) : poly(std::move(p)), degree(m) {
    auto g = poly.form_degree();
    if (!g || (!poly.is_zero() && *g != m))
      throw InvalidGrade("mixed or wrong dz-grade for a symmetric form");
  }

  static SymForm of(MultiPoly<R> p) {
    auto g = p.form_degree();
    if (!g) throw InvalidGrade("mixed dz-grade");
    std::int64_t m = p.is_zero() ? 0 : *g;
    return SymForm(std::move(p), m);
  }
};

// Ring-level dispatch table for the spec's single-name arithmetic entry.
enum class RingOp { add, mul, exact_divide };

template <class R>
MultiPoly<R> ring_arithmetic(const MultiPoly<R>& a, const MultiPoly<R>& b, RingOp op) {
  switch (op) {
  case RingOp::add: return a + b;
  case RingOp::mul: return a * b;
  case RingOp::exact_divide: return a.exact_divide(b);
  }
  throw Error("unreachable");
}

// Dense random homogeneous polynomial of the given degree (dz-free).
template <class R>
MultiPoly<R> random_homogeneous(const R& ring, std::size_t nvars, std::int64_t deg, Rng& rng) {
  MultiPoly<R> p(ring, nvars);
  std::vector<std::int64_t> expo(nvars, 0);
  // walk all compositions of deg into nvars parts
  auto rec = [&](auto&& self, std::size_t pos, std::int64_t left) -> void {
    if (pos + 1 == nvars) {
      expo[pos] = left;
      Monomial m(nvars);
      m.z = expo;
      p.add_term(m, ring.random(rng));
      return;
    }
    for (std::int64_t e = 0; e <= left; ++e) {
      expo[pos] = e;
      self(self, pos + 1, left - e);
    }
  };
  if (nvars == 0) return p;
  rec(rec, 0, deg);
  return p;
}

} // namespace mcm
