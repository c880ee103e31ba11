#pragma once

#include <vector>

#include "eigenslope/ring.hpp"

namespace eigenslope {

// Coefficient ring of a weight disc: polynomials in w of degree < W with
// p-adic coefficients. Specializing at a point of positive valuation is a ring
// map to PadicScalar.
struct FamilyRing {
  long p;
  int prec;
  int W;

  bool operator==(const FamilyRing& o) const { return p == o.p && prec == o.prec && W == o.W; }
};

struct FamilyElem {
  int W = 0;
  std::vector<PadicScalar> c;  // size W, each carries (p, prec)

  FamilyElem() = default;
  FamilyElem(const FamilyRing& ring, const PadicScalar& c0) : W(ring.W) {
    c.assign(W, PadicScalar::zero(ring.p, ring.prec));
    c[0] = c0;
  }
  static FamilyElem zero(const FamilyRing& ring) {
    return FamilyElem(ring, PadicScalar::zero(ring.p, ring.prec));
  }
  static FamilyElem one(const FamilyRing& ring) {
    return FamilyElem(ring, PadicScalar::one(ring.p, ring.prec));
  }
  static FamilyElem var(const FamilyRing& ring) {
    FamilyElem e = zero(ring);
    if (ring.W > 1) e.c[1] = PadicScalar::one(ring.p, ring.prec);
    return e;
  }

  const PadicScalar& center() const { return c[0]; }

  bool is_zero_to_prec() const {
    for (auto& x : c)
      if (!x.is_zero_to_prec()) return false;
    return true;
  }
  // Unit iff the center coefficient is a unit (the ring is local).
  bool is_unit() const { return c[0].is_unit(); }

  int min_precision() const {
    int m = kValInf;
    for (auto& x : c)
      if (!x.is_exact_zero()) m = std::min(m, x.precision());
    return m;
  }
  // Minimum over grades of v_p(c_j); +inf if all exact zero.
  int min_val() const {
    int m = kValInf;
    for (auto& x : c) m = std::min(m, x.val());
    return m;
  }

  friend FamilyElem operator+(const FamilyElem& a, const FamilyElem& b) {
    FamilyElem r = a;
    for (int i = 0; i < r.W; ++i) r.c[i] = r.c[i] + b.c[i];
    return r;
  }
  friend FamilyElem operator-(const FamilyElem& a, const FamilyElem& b) {
    FamilyElem r = a;
    for (int i = 0; i < r.W; ++i) r.c[i] = r.c[i] - b.c[i];
    return r;
  }
  friend FamilyElem operator*(const FamilyElem& a, const FamilyElem& b) {
    FamilyElem r = a;
    for (int i = 0; i < r.W; ++i) r.c[i] = PadicScalar::zero(a.c[i].prime(), a.c[i].precision());
    for (int i = 0; i < a.W; ++i) {
      if (a.c[i].is_zero_to_prec()) continue;
      for (int j = 0; i + j < b.W; ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    return r;
  }

  FamilyElem inv() const {
    if (!is_unit()) throw MathError("FamilyElem::inv: center not a unit");
    FamilyElem r = *this;
    PadicScalar u = c[0].inv();
    r.c[0] = u;
    for (int n = 1; n < W; ++n) {
      PadicScalar acc = PadicScalar::zero(u.prime(), u.precision());
      for (int k = 1; k <= n; ++k) acc = acc + c[k] * r.c[n - k];
      r.c[n] = (PadicScalar::zero(u.prime(), u.precision()) - u) * acc;
    }
    return r;
  }

  // Evaluate at w0 with v_p(w0) >= 1.
  PadicScalar specialize(const PadicScalar& w0) const {
    if (!w0.is_exact_zero() && w0.val() < 1) throw MathError("FamilyElem::specialize: point not inside the disc");
    PadicScalar acc = PadicScalar::zero(w0.prime(), w0.precision());
    for (int i = W - 1; i >= 0; --i) acc = acc * w0 + c[i];
    return acc;
  }
};

inline bool ring_is_zero(const FamilyElem& x) { return x.is_zero_to_prec(); }
inline bool ring_is_unit(const FamilyElem& x) { return x.is_unit(); }
inline FamilyElem ring_inv(const FamilyElem& x) { return x.inv(); }
inline FamilyElem ring_zero(const FamilyElem& sample) {
  FamilyElem r = sample;
  for (auto& x : r.c) x = PadicScalar::zero(x.prime(), x.precision());
  return r;
}
inline FamilyElem ring_one(const FamilyElem& sample) {
  FamilyElem r = ring_zero(sample);
  r.c[0] = PadicScalar::one(r.c[0].prime(), r.c[0].precision());
  return r;
}
inline FamilyElem ring_from_long(const FamilyElem& sample, long v) {
  FamilyElem r = ring_zero(sample);
  r.c[0] = PadicScalar::from_long(r.c[0].prime(), r.c[0].precision(), v);
  return r;
}
// Pivoting over the family ring keys on the center valuation; non-units never win over units.
inline long ring_pivot_weight(const FamilyElem& x) { return x.center().val(); }
// Family elimination only ever divides by center units; graded solvers handle the rest.
inline FamilyElem ring_div(const FamilyElem& a, const FamilyElem& b) {
  if (b.center().val() != 0) throw MathError("FamilyElem::ring_div: pivot center not a unit");
  return a * b.inv();
}

}  // namespace eigenslope
