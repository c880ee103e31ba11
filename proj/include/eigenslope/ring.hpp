#pragma once

#include <gmpxx.h>

#include "eigenslope/padic.hpp"

namespace eigenslope {

// Generic ring hooks used by the templated polynomial / matrix code.
// Instances: PadicScalar, FamilyElem (family.hpp), mpq_class.

inline bool ring_is_zero(const PadicScalar& x) { return x.is_zero_to_prec(); }
inline bool ring_is_unit(const PadicScalar& x) { return x.is_unit(); }
inline PadicScalar ring_inv(const PadicScalar& x) { return x.inv(); }
inline PadicScalar ring_zero(const PadicScalar& sample) {
  return PadicScalar::zero(sample.prime(), sample.precision());
}
inline PadicScalar ring_one(const PadicScalar& sample) {
  return PadicScalar::one(sample.prime(), sample.precision());
}
inline PadicScalar ring_from_long(const PadicScalar& sample, long v) {
  return PadicScalar::from_long(sample.prime(), sample.precision(), v);
}
// Pivot preference: smaller is better. p-adics pivot on minimal valuation.
inline long ring_pivot_weight(const PadicScalar& x) { return x.val(); }
// Exact division by a pivot (quotient integral by pivot choice).
inline PadicScalar ring_div(const PadicScalar& a, const PadicScalar& b) { return a.div(b); }

inline bool ring_is_zero(const mpq_class& x) { return x == 0; }
inline bool ring_is_unit(const mpq_class& x) { return x != 0; }
inline mpq_class ring_inv(const mpq_class& x) { return mpq_class(1) / x; }
inline mpq_class ring_zero(const mpq_class&) { return mpq_class(0); }
inline mpq_class ring_one(const mpq_class&) { return mpq_class(1); }
inline mpq_class ring_from_long(const mpq_class&, long v) { return mpq_class(v); }
inline long ring_pivot_weight(const mpq_class& x) { return x == 0 ? 1 : 0; }
inline mpq_class ring_div(const mpq_class& a, const mpq_class& b) { return a / b; }

inline mpq_class rat(long num, long den = 1) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

inline int mpq_val(const mpq_class& x, long p) {
  if (x == 0) return kValInf;
  return mpz_val(x.get_num(), p) - mpz_val(x.get_den(), p);
}

}  // namespace eigenslope
