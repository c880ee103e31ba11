#pragma once

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigenslope {

// Math-level failures surface as typed exceptions; the CLI maps them to exit 2/3.
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AmbiguousVertex : MathError {
  using MathError::MathError;
};
struct SlopeNotAdapted : MathError {
  using MathError::MathError;
};
struct InsufficientTruncation : MathError {
  using MathError::MathError;
};
struct InsufficientMoments : MathError {
  using MathError::MathError;
};
struct PrecisionExhausted : MathError {
  using MathError::MathError;
};
struct PrecisionTooLowToDecide : MathError {
  using MathError::MathError;
};
struct NotSeparated : MathError {
  using MathError::MathError;
};
struct NotInMonoid : MathError {
  using MathError::MathError;
};
struct NotContracting : MathError {
  using MathError::MathError;
};
struct PresentationError : MathError {
  using MathError::MathError;
};
struct MissingGenerator : MathError {
  using MathError::MathError;
};
struct WeightOrder : MathError {
  using MathError::MathError;
};
struct NotInGroup : MathError {
  using MathError::MathError;
};
struct NotReflection : MathError {
  using MathError::MathError;
};
struct ZeroUValue : MathError {
  using MathError::MathError;
};
struct EmbeddingMismatch : MathError {
  using MathError::MathError;
};
struct TypeUndetermined : MathError {
  using MathError::MathError;
};

inline constexpr int kValInf = std::numeric_limits<int>::max() / 2;

inline mpz_class pow_mpz(long base, long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return r;
}

inline int mpz_val(const mpz_class& x, long p) {
  if (x == 0) return kValInf;
  mpz_class t = x, q, r;
  int v = 0;
  while (true) {
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
    if (r != 0) break;
    t = q;
    ++v;
  }
  return v;
}

// Fixed-precision p-adic scalar: residue mod p^prec plus the known valuation.
// An exact zero (prec-independent) is distinguished from "zero to precision prec".
class PadicScalar {
 public:
  PadicScalar() : p_(2), prec_(0), r_(0), val_(kValInf), exact_zero_(true) {}

  PadicScalar(long p, int prec, mpz_class v) : p_(p), prec_(prec) { set_residue(std::move(v)); }

  static PadicScalar zero(long p, int prec) {
    PadicScalar x;
    x.p_ = p;
    x.prec_ = prec;
    return x;
  }
  static PadicScalar one(long p, int prec) { return PadicScalar(p, prec, 1); }
  static PadicScalar from_long(long p, int prec, long v) { return PadicScalar(p, prec, mpz_class(v)); }

  long prime() const { return p_; }
  int precision() const { return prec_; }
  const mpz_class& residue() const { return r_; }
  bool is_exact_zero() const { return exact_zero_; }
  bool is_zero_to_prec() const { return exact_zero_ || r_ == 0; }
  // Valuation; for a residue that is zero to precision this is the lower bound prec.
  int val() const { return exact_zero_ ? kValInf : (r_ == 0 ? prec_ : val_); }
  bool is_unit() const { return !is_zero_to_prec() && val_ == 0; }

  PadicScalar with_precision(int prec) const {
    if (exact_zero_) {
      PadicScalar z = zero(p_, prec);
      return z;
    }
    PadicScalar x;
    x.p_ = p_;
    x.prec_ = prec;
    mpz_class m = pow_mpz(p_, prec);
    mpz_class rr = r_ % m;
    if (rr < 0) rr += m;
    x.set_residue(rr);
    return x;
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    if (a.exact_zero_) return b;
    if (b.exact_zero_) return a;
    assert(a.p_ == b.p_);
    int prec = std::min(a.prec_, b.prec_);
    PadicScalar x;
    x.p_ = a.p_;
    x.prec_ = prec;
    mpz_class m = pow_mpz(a.p_, prec);
    x.set_residue((a.r_ + b.r_) % m);
    return x;
  }
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + b.neg(); }
  PadicScalar neg() const {
    if (exact_zero_) return *this;
    PadicScalar x;
    x.p_ = p_;
    x.prec_ = prec_;
    mpz_class m = pow_mpz(p_, prec_);
    mpz_class rr = (m - r_) % m;
    x.set_residue(rr);
    return x;
  }
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    if (a.exact_zero_ || b.exact_zero_) return zero_like(a.exact_zero_ ? b : a);
    assert(a.p_ == b.p_);
    // abs precision of x*y: min(prec_a + v_b, prec_b + v_a), capped for zero-to-prec args.
    long prec = std::min<long>(static_cast<long>(a.prec_) + std::min<int>(b.val(), b.prec_),
                               static_cast<long>(b.prec_) + std::min<int>(a.val(), a.prec_));
    prec = std::min<long>(prec, std::max(a.prec_, b.prec_));
    PadicScalar x;
    x.p_ = a.p_;
    x.prec_ = static_cast<int>(prec);
    mpz_class m = pow_mpz(a.p_, x.prec_);
    x.set_residue((a.r_ * b.r_) % m);
    return x;
  }
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

  // Inverse of a unit, exact at the current precision.
  PadicScalar inv() const {
    if (!is_unit()) throw MathError("PadicScalar::inv: not a unit");
    PadicScalar x;
    x.p_ = p_;
    x.prec_ = prec_;
    mpz_class m = pow_mpz(p_, prec_);
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), r_.get_mpz_t(), m.get_mpz_t()) == 0)
      throw MathError("PadicScalar::inv: not invertible");
    x.set_residue(r);
    return x;
  }

  // Divide by p^k; reduces precision by k. Requires val >= k unless zero-to-prec.
  PadicScalar rshift(int k) const {
    if (exact_zero_) return *this;
    if (k == 0) return *this;
    if (val() < k) throw MathError("PadicScalar::rshift: valuation too small");
    PadicScalar x;
    x.p_ = p_;
    x.prec_ = prec_ - k;
    if (x.prec_ <= 0) throw PrecisionExhausted("PadicScalar::rshift: precision exhausted");
    mpz_class q = r_ / pow_mpz(p_, k);
    x.set_residue(q % pow_mpz(p_, x.prec_));
    return x;
  }
  PadicScalar lshift(int k) const {
    if (exact_zero_ || k == 0) return *this;
    PadicScalar x;
    x.p_ = p_;
    x.prec_ = prec_ + k;
    mpz_class m = pow_mpz(p_, x.prec_);
    x.set_residue((r_ * pow_mpz(p_, k)) % m);
    return x;
  }

  // Exact division by a scalar of known valuation; loses divisor.val digits.
  PadicScalar div(const PadicScalar& d) const {
    if (d.is_zero_to_prec()) throw MathError("PadicScalar::div: divisor zero to precision");
    int v = d.val();
    PadicScalar unit = d.rshift(v);
    PadicScalar num = is_zero_to_prec() ? with_precision(std::max(1, prec_ - v)) : rshift(v);
    if (exact_zero_) return *this;
    return num * unit.inv().with_precision(num.prec_);
  }

  bool congruent(const PadicScalar& o, int digits) const {
    PadicScalar d = *this - o;
    return d.val() >= digits;
  }

  std::string str() const {
    if (exact_zero_) return "0";
    return r_.get_str() + " + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
  }

 private:
  static PadicScalar zero_like(const PadicScalar& a) {
    PadicScalar z;
    z.p_ = a.p_;
    z.prec_ = a.prec_;
    return z;
  }
  void set_residue(mpz_class v) {
    mpz_class m = pow_mpz(p_, prec_);
    v %= m;
    if (v < 0) v += m;
    r_ = std::move(v);
    exact_zero_ = false;
    val_ = (r_ == 0) ? prec_ : mpz_val(r_, p_);
  }

  long p_;
  int prec_;
  mpz_class r_;
  int val_;
  bool exact_zero_;
};

// Teichmueller representative of a (mod p^prec); for p=2 this is +-1 picked mod 4.
inline mpz_class teichmuller(long p, int prec, const mpz_class& a) {
  mpz_class m = pow_mpz(p, prec);
  if (p == 2) {
    mpz_class a4 = a % 4;
    if (a4 < 0) a4 += 4;
    return (a4 == 1) ? mpz_class(1) : m - 1;
  }
  mpz_class x = a % m;
  if (x < 0) x += m;
  // iterate x <- x^p until stable
  for (int i = 0; i < prec + 2; ++i) {
    mpz_class y;
    mpz_powm_ui(y.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p), m.get_mpz_t());
    if (y == x) break;
    x = y;
  }
  return x;
}

// log(u) for u = 1 mod p (mod 4 if p=2), as a residue mod p^prec (value has val >= 1).
inline mpz_class padic_log_unit(long p, int prec, const mpz_class& u) {
  int guard = 2;
  {
    long t = prec;
    while (t > 1) {
      t /= p;
      ++guard;
    }
  }
  int wp = prec + guard;
  mpz_class m = pow_mpz(p, wp);
  mpz_class z = (u - 1) % m;
  if (z < 0) z += m;
  if (z == 0) return 0;
  int vz = mpz_val(z, p);
  if (vz < 1 || (p == 2 && vz < 2)) throw MathError("padic_log_unit: argument not principal");
  // sum (-1)^(n+1) z^n / n; terms vanish once n*vz - v_p(n) >= wp
  mpz_class acc = 0, zn = 1;
  for (int n = 1;; ++n) {
    zn = (zn * z) % m;
    if (static_cast<long>(n) * vz - mpz_val(mpz_class(n), p) >= wp) break;
    int vn = mpz_val(mpz_class(n), p);
    mpz_class term = zn / pow_mpz(p, vn);
    mpz_class nu = mpz_class(n) / pow_mpz(p, vn);
    mpz_class nuinv;
    mpz_invert(nuinv.get_mpz_t(), nu.get_mpz_t(), m.get_mpz_t());
    term = (term * nuinv) % m;
    // reattach p^vn by dividing: term now is z^n/n up to the p-part handled above
    // v(z^n/n) = n*vz - vn >= 1, so the division below is exact
    if (n % 2 == 1)
      acc = (acc + term * pow_mpz(p, 0)) % m;
    else
      acc = (acc - term + m * 2) % m;
    // note: we folded p^{-vn} into term by integer division of zn, consistent since vz*n >= vn+1
  }
  mpz_class mm = pow_mpz(p, prec);
  return acc % mm;
}

}  // namespace eigenslope
