#pragma once

#include <algorithm>
#include <vector>

#include "eigenslope/ring.hpp"

namespace eigenslope {

// Dense polynomial / truncated power series over a ring R.
// Coefficient 0 is the constant term. No automatic trimming: callers that care
// about the degree of a p-adic polynomial must decide what "zero" means.
template <class R>
struct Poly {
  std::vector<R> c;

  Poly() = default;
  explicit Poly(std::vector<R> coeffs) : c(std::move(coeffs)) {}

  int size() const { return static_cast<int>(c.size()); }
  int degree() const {  // index of last coefficient not exactly-zero-to-precision
    for (int i = size() - 1; i >= 0; --i)
      if (!ring_is_zero(c[i])) return i;
    return 0;
  }
  const R& operator[](int i) const { return c[i]; }
  R& operator[](int i) { return c[i]; }

  static Poly constant(const R& v) { return Poly(std::vector<R>{v}); }
};

template <class R>
Poly<R> poly_add(const Poly<R>& a, const Poly<R>& b) {
  Poly<R> r;
  r.c.resize(std::max(a.size(), b.size()), ring_zero(a.size() ? a.c[0] : b.c[0]));
  for (int i = 0; i < a.size(); ++i) r.c[i] = a.c[i];
  for (int i = 0; i < b.size(); ++i) r.c[i] = r.c[i] + b.c[i];
  return r;
}

template <class R>
Poly<R> poly_neg(const Poly<R>& a) {
  Poly<R> r = a;
  for (auto& x : r.c) x = ring_zero(x) - x;
  return r;
}

template <class R>
Poly<R> poly_sub(const Poly<R>& a, const Poly<R>& b) {
  return poly_add(a, poly_neg(b));
}

// Product truncated to degree <= trunc (trunc < 0 means full product).
template <class R>
Poly<R> poly_mul(const Poly<R>& a, const Poly<R>& b, int trunc = -1) {
  int deg = a.size() + b.size() - 2;
  if (trunc >= 0) deg = std::min(deg, trunc);
  Poly<R> r;
  r.c.resize(deg + 1, ring_zero(a.c[0]));
  for (int i = 0; i < a.size(); ++i) {
    if (ring_is_zero(a.c[i])) continue;
    for (int j = 0; j < b.size() && i + j <= deg; ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
  }
  return r;
}

template <class R>
Poly<R> poly_scale(const Poly<R>& a, const R& s) {
  Poly<R> r = a;
  for (auto& x : r.c) x = x * s;
  return r;
}

// Inverse of a series with unit constant term, mod X^{trunc+1}.
template <class R>
Poly<R> series_inv(const Poly<R>& a, int trunc) {
  Poly<R> r;
  r.c.assign(trunc + 1, ring_zero(a.c[0]));
  R u = ring_inv(a.c[0]);
  r.c[0] = u;
  for (int n = 1; n <= trunc; ++n) {
    R acc = ring_zero(u);
    for (int k = 1; k <= n && k < a.size(); ++k) acc = acc + a.c[k] * r.c[n - k];
    r.c[n] = ring_zero(u) - u * acc;
  }
  return r;
}

// a / b mod X^{trunc+1}; b has unit constant term.
template <class R>
Poly<R> series_div(const Poly<R>& a, const Poly<R>& b, int trunc) {
  return poly_mul(a, series_inv(b, trunc), trunc);
}

template <class R>
R poly_eval(const Poly<R>& a, const R& x) {
  R acc = ring_zero(x);
  for (int i = a.size() - 1; i >= 0; --i) acc = acc * x + a.c[i];
  return acc;
}

// Reversal X^{deg} * Q(1/X) for a polynomial of the given degree.
template <class R>
Poly<R> poly_reverse(const Poly<R>& q, int deg) {
  Poly<R> r;
  r.c.assign(deg + 1, ring_zero(q.c[0]));
  for (int i = 0; i <= deg && i < q.size(); ++i) r.c[deg - i] = q.c[i];
  return r;
}

template <class R>
Poly<R> poly_trunc(const Poly<R>& a, int deg) {
  Poly<R> r = a;
  if (r.size() > deg + 1) r.c.resize(deg + 1);
  return r;
}

}  // namespace eigenslope
