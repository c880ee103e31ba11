#pragma once

#include <optional>
#include <vector>

#include "eigenslope/family.hpp"
#include "eigenslope/linalg.hpp"

namespace eigenslope {

// Element of the monoid acting on the distribution modules: integral matrix
// with lower-left entry divisible by p, upper-left a p-adic unit, det != 0.
struct SigmaMatrix {
  long long a, b, c, d;

  long long det() const { return a * d - b * c; }
  bool in_monoid(long p) const { return c % p == 0 && a % p != 0 && det() != 0; }
  SigmaMatrix mul(const SigmaMatrix& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  // inverse scaled by det (integral); for SL2 elements this is the true inverse
  SigmaMatrix adjugate() const { return {d, -b, -c, a}; }
};

inline std::vector<SigmaMatrix> up_summands(long p) {
  std::vector<SigmaMatrix> v;
  for (long a = 0; a < p; ++a) v.push_back({1, a, 0, p});
  return v;
}

// Integer weight with a tame finite-order part: x -> x^k * omega(x)^eps_pow,
// omega the Teichmueller character. Wildly ramified parts are rejected.
struct WeightChar {
  long p;
  int prec;
  long k;
  long eps_pow = 0;  // power of omega; order divides p-1 (or 2 for p=2)
  int level_s = 1;

  long tame_order() const { return p == 2 ? 2 : p - 1; }

  PadicScalar eval_unit(const mpz_class& u) const {
    // u must be a p-adic unit
    mpz_class m = pow_mpz(p, prec);
    mpz_class uu = u % m;
    if (uu < 0) uu += m;
    mpz_class r;
    if (k >= 0) {
      mpz_powm_ui(r.get_mpz_t(), uu.get_mpz_t(), static_cast<unsigned long>(k), m.get_mpz_t());
    } else {
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), uu.get_mpz_t(), m.get_mpz_t());
      mpz_powm_ui(r.get_mpz_t(), inv.get_mpz_t(), static_cast<unsigned long>(-k), m.get_mpz_t());
    }
    if (eps_pow % tame_order() != 0) {
      mpz_class w = teichmuller(p, prec, uu);
      mpz_class we;
      mpz_powm_ui(we.get_mpz_t(), w.get_mpz_t(), static_cast<unsigned long>(eps_pow % tame_order()),
                  m.get_mpz_t());
      r = (r * we) % m;
    }
    return PadicScalar(p, prec, r);
  }

  // sigma(x) = p^{-v(x)} x, then evaluate; defined for any nonzero rational integer
  PadicScalar eval_sigma(const mpz_class& x) const {
    mpz_class u = x;
    while (u % p == 0) u /= p;
    return eval_unit(u);
  }
};

// Evaluation of lambda1(a + b x) as a truncated series, for lambda1 = x^k * eps.
// eps is constant on a + b x (b x ranges over pZ_p cosets of a), so it
// contributes the scalar eps(a).
inline Poly<PadicScalar> weight_series(const WeightChar& w, long long a, long long b, int N) {
  PadicScalar one = PadicScalar::one(w.p, w.prec);
  Poly<PadicScalar> lin(std::vector<PadicScalar>{PadicScalar::from_long(w.p, w.prec, a),
                                                 PadicScalar::from_long(w.p, w.prec, b)});
  Poly<PadicScalar> r = Poly<PadicScalar>::constant(one);
  long e = w.k >= 0 ? w.k : -w.k;
  Poly<PadicScalar> base = w.k >= 0 ? lin : series_inv(lin, N - 1);
  // binary power, truncated
  while (e > 0) {
    if (e & 1) r = poly_mul(r, base, N - 1);
    base = poly_mul(base, base, N - 1);
    e >>= 1;
  }
  if (w.eps_pow % w.tame_order() != 0) {
    WeightChar tame{w.p, w.prec, 0, w.eps_pow, 1};
    r = poly_scale(r, tame.eval_unit(mpz_class(static_cast<long>(a))));
  }
  return r;
}

namespace detail {

// Rows of the moment matrix for the action with weight factor lambda1(u + v x)
// and coordinate substitution x -> (s + t x)/(u + v x).
inline Mat<PadicScalar> moment_matrix(const WeightChar& w, long long u, long long v, long long s,
                                      long long t, int N) {
  PadicScalar zero = PadicScalar::zero(w.p, w.prec);
  Poly<PadicScalar> lin(std::vector<PadicScalar>{PadicScalar::from_long(w.p, w.prec, u),
                                                 PadicScalar::from_long(w.p, w.prec, v)});
  Poly<PadicScalar> num(std::vector<PadicScalar>{PadicScalar::from_long(w.p, w.prec, s),
                                                 PadicScalar::from_long(w.p, w.prec, t)});
  Poly<PadicScalar> core = poly_mul(num, series_inv(lin, N - 1), N - 1);
  Poly<PadicScalar> row = weight_series(w, u, v, N);
  Mat<PadicScalar> T(N, N, zero);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N && i < row.size(); ++i) T.at(j, i) = row.c[i];
    if (j + 1 < N) row = poly_mul(row, core, N - 1);
  }
  return T;
}

}  // namespace detail

// Matrix of the dual action on moments: row j holds the series coefficients of
// lambda1(a+bx) * ((c+dx)/(a+bx))^j. Moments transform as column vectors
// mu' = T mu; entries satisfy v(T_{ji}) >= j - i and T(gh) = T(g) T(h).
inline Mat<PadicScalar> act_matrix(const SigmaMatrix& g, const WeightChar& w, int N) {
  if (!g.in_monoid(w.p)) throw NotInMonoid("act_matrix: matrix outside the monoid");
  return detail::moment_matrix(w, g.a, g.b, g.c, g.d, N);
}

// Transpose-side orientation of the same action: row j expands
// lambda1(a+cx) * ((b+dx)/(a+cx))^j. Entries satisfy v >= i - j, so dropped
// high moments perturb row j only at valuation >= N - j; the symbol engine is
// built on this side. dual_act_matrix(g h) = dual_act_matrix(h) dual_act_matrix(g).
inline Mat<PadicScalar> dual_act_matrix(const SigmaMatrix& g, const WeightChar& w, int N) {
  if (!g.in_monoid(w.p)) throw NotInMonoid("dual_act_matrix: matrix outside the monoid");
  return detail::moment_matrix(w, g.a, g.c, g.b, g.d, N);
}

// Two-character action: the lambda0-normalized action twisted by
// lambda2(det g |det g|_p).
inline Mat<PadicScalar> act_matrix_pair(const SigmaMatrix& g, const WeightChar& l1,
                                        const WeightChar& l2, int N) {
  WeightChar l0{l1.p, l1.prec, l1.k - l2.k, l1.eps_pow - l2.eps_pow, 1};
  Mat<PadicScalar> T = act_matrix(g, l0, N);
  PadicScalar tw = l2.eval_sigma(mpz_class(static_cast<long>(g.det())));
  return mat_scale(T, tw);
}

// Central element z (scalar matrix, possibly p-divisible) acts by lambda(sigma(z)),
// i.e. l1(sigma(z)) * l2(sigma(z)) on the two-character convention.
inline PadicScalar central_scalar(const WeightChar& l1, const WeightChar& l2, long long z) {
  return l1.eval_sigma(mpz_class(static_cast<long>(z))) * l2.eval_sigma(mpz_class(static_cast<long>(z)));
}

// Exact classical action on the dual of degree<=k polynomials: row j of the
// (k+1)x(k+1) matrix holds the coefficients of (a+bx)^{k-j} (c+dx)^j.
inline Mat<mpq_class> act_matrix_classical(const SigmaMatrix& g, long k) {
  int N = static_cast<int>(k) + 1;
  Mat<mpq_class> T(N, N, mpq_class(0));
  Poly<mpq_class> lin(std::vector<mpq_class>{mpq_class(static_cast<long>(g.a)),
                                             mpq_class(static_cast<long>(g.b))});
  Poly<mpq_class> num(std::vector<mpq_class>{mpq_class(static_cast<long>(g.c)),
                                             mpq_class(static_cast<long>(g.d))});
  for (int j = 0; j < N; ++j) {
    Poly<mpq_class> row = Poly<mpq_class>::constant(mpq_class(1));
    for (int t = 0; t < N - 1 - j; ++t) row = poly_mul(row, lin);
    for (int t = 0; t < j; ++t) row = poly_mul(row, num);
    for (int i = 0; i < N && i < row.size(); ++i) T.at(j, i) = row.c[i];
  }
  return T;
}

// Transpose-side classical orientation, matching dual_act_matrix.
inline Mat<mpq_class> dual_act_matrix_classical(const SigmaMatrix& g, long k) {
  return act_matrix_classical(SigmaMatrix{g.a, g.c, g.b, g.d}, k);
}

// ---------------------------------------------------------------------------
// Weight families. The disc is charted through the exponent: the character
//   a |-> omega(a)^{k_c} <a>^{k_c + p^rho * t}
// in the truncated variable t, so that t = (k - k_c)/p^rho specializes to
// x -> x^k. The radius exponent rho is chosen so every matrix entry below is
// integral at the working moment count.
// ---------------------------------------------------------------------------
struct FamilyWeight {
  long p;
  int prec;
  int W;
  long k_center;
  int max_moments;
  int rho;

  FamilyWeight(long p_, int prec_, int W_, long k_center_, int max_moments_)
      : p(p_), prec(prec_), W(W_), k_center(k_center_), max_moments(max_moments_) {
    rho = nu() + log_gamma_val() + 1;
  }

  long gamma() const { return p == 2 ? 5 : p + 1; }
  int log_gamma_val() const { return p == 2 ? 2 : 1; }
  int nu() const {
    int v = 0;
    long t = std::max(2, max_moments);
    long q = 1;
    while (q < t) {
      q *= p;
      ++v;
    }
    return v;
  }
  FamilyRing ring() const { return FamilyRing{p, prec, W}; }

  // t-coordinate of the weight x^k; defined when p^rho | k - k_center deeply enough.
  PadicScalar t_for_weight(long k) const {
    mpz_class diff(k - k_center);
    if (diff == 0) return PadicScalar::zero(p, prec);
    int v = mpz_val(diff, p);
    if (v < rho + 1) throw MathError("FamilyWeight: weight outside the disc chart");
    PadicScalar t(p, prec + rho, diff);
    return t.rshift(rho);
  }
  // global weight-disc coordinate w with 1 + w = gamma^k, i.e. w0 = gamma^k - 1
  PadicScalar t_for_global_w(const PadicScalar& w0) const {
    mpz_class u = (w0.residue() + 1) % pow_mpz(p, w0.precision());
    mpz_class lg = padic_log_unit(p, w0.precision(), u);
    mpz_class lgam = padic_log_unit(p, w0.precision(), pow_mpz(gamma(), 1));
    // t0 = log(1+w0)/log(gamma) - k_center, then shift by p^-rho
    PadicScalar num(p, w0.precision(), lg);
    PadicScalar den(p, w0.precision(), lgam);
    PadicScalar s = num.div(den);
    PadicScalar t0 = s - PadicScalar::from_long(p, s.precision(), k_center);
    if (t0.is_zero_to_prec()) return PadicScalar::zero(p, t0.precision() - rho);
    if (t0.val() < rho + 1) throw MathError("FamilyWeight: global point outside the disc chart");
    return t0.rshift(rho);
  }
};

// lambda1(a+bx) over the family ring: (a+bx)^{k_c} * exp(p^rho t * log<a+bx>),
// expanded in the truncated variable t grade by grade.
inline Poly<FamilyElem> weight_series_family(const FamilyWeight& fw, long long a, long long b,
                                             int N) {
  if (N > fw.max_moments) throw MathError("weight_series_family: moment count above chart bound");
  long p = fw.p;
  int guard = fw.rho * fw.W + 8;
  int wp = fw.prec + guard;
  PadicScalar zero_g = PadicScalar::zero(p, wp);
  // base = (a+bx)^{k_c} at guard precision
  WeightChar wc{p, wp, fw.k_center, 0, 1};
  Poly<PadicScalar> base = weight_series(wc, a, b, N);
  base.c.resize(N, zero_g);
  // scaled log: Lhat = p^nu * log<a+bx> = p^nu (log<a> + log(1 + (b/a)x)), integral
  int nu = fw.nu();
  mpz_class mm = pow_mpz(p, wp);
  mpz_class az(static_cast<long>(a));
  mpz_class om = teichmuller(p, wp, az);
  mpz_class ominv;
  mpz_invert(ominv.get_mpz_t(), om.get_mpz_t(), mm.get_mpz_t());
  mpz_class abra = (az * ominv) % mm;  // <a>
  mpz_class loga = padic_log_unit(p, wp, abra);
  Poly<PadicScalar> Lhat(std::vector<PadicScalar>(N, zero_g));
  Lhat.c[0] = PadicScalar(p, wp, loga).lshift(nu).with_precision(wp);
  {
    // log(1 + beta x) with beta = b/a: sum (-1)^{m+1} beta^m x^m / m, scaled by p^nu
    PadicScalar beta = PadicScalar::from_long(p, wp, b).div(PadicScalar::from_long(p, wp, a));
    PadicScalar bm = PadicScalar::one(p, wp);
    for (int m = 1; m < N; ++m) {
      bm = bm * beta;
      int vm = mpz_val(mpz_class(m), p);
      PadicScalar mu = PadicScalar::from_long(p, wp, m).rshift(vm);
      PadicScalar term = bm.lshift(nu).rshift(vm) * mu.inv();
      Lhat.c[m] = (m % 2 == 1) ? term : zero_g - term;
    }
  }
  // grades: coeff_j = base * p^{(rho-nu) j} Lhat^j / j!
  int extra = fw.rho - nu;  // = log_gamma_val + 1 >= 2
  std::vector<Poly<PadicScalar>> grade(fw.W, Poly<PadicScalar>(std::vector<PadicScalar>(N, zero_g)));
  Poly<PadicScalar> pw = base;
  mpz_class fact = 1;
  for (int j = 0; j < fw.W; ++j) {
    if (j > 0) {
      pw = poly_mul(pw, Lhat, N - 1);
      fact *= j;
    }
    int vf = mpz_val(fact, p);
    PadicScalar fu = PadicScalar(p, wp, fact).rshift(vf).inv();
    for (int i = 0; i < N; ++i) {
      PadicScalar x = pw.c[i];
      if (x.is_exact_zero()) {
        grade[j].c[i] = x;
        continue;
      }
      x = x.lshift(extra * j);
      if (x.val() < vf && !x.is_zero_to_prec())
        throw PrecisionExhausted("weight_series_family: integrality margin violated");
      grade[j].c[i] = (x.rshift(vf) * fu).with_precision(fw.prec);
    }
  }
  FamilyRing fr = fw.ring();
  Poly<FamilyElem> out(std::vector<FamilyElem>(N, FamilyElem::zero(fr)));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < fw.W; ++j) out.c[i].c[j] = grade[j].c[i].with_precision(fw.prec);
  return out;
}

namespace detail {

inline Mat<FamilyElem> moment_matrix_family(const FamilyWeight& fw, long long u, long long v,
                                            long long s, long long t, int N) {
  FamilyRing fr = fw.ring();
  FamilyElem fzero = FamilyElem::zero(fr);
  PadicScalar zero = PadicScalar::zero(fw.p, fw.prec);
  Poly<PadicScalar> lin(std::vector<PadicScalar>{PadicScalar::from_long(fw.p, fw.prec, u),
                                                 PadicScalar::from_long(fw.p, fw.prec, v)});
  Poly<PadicScalar> num(std::vector<PadicScalar>{PadicScalar::from_long(fw.p, fw.prec, s),
                                                 PadicScalar::from_long(fw.p, fw.prec, t)});
  Poly<PadicScalar> core = poly_mul(num, series_inv(lin, N - 1), N - 1);
  Poly<FamilyElem> row = weight_series_family(fw, u, v, N);
  Mat<FamilyElem> T(N, N, fzero);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N && i < row.size(); ++i) T.at(j, i) = row.c[i];
    if (j + 1 < N) {
      // multiply the family row by the scalar series core
      Poly<FamilyElem> nr(std::vector<FamilyElem>(N, fzero));
      for (int i = 0; i < N; ++i) {
        if (row.c[i].is_zero_to_prec()) continue;
        for (int m = 0; i + m < N && m < core.size(); ++m) {
          if (core.c[m].is_zero_to_prec()) continue;
          FamilyElem term = row.c[i];
          for (auto& cc : term.c) cc = cc * core.c[m];
          nr.c[i + m] = nr.c[i + m] + term;
        }
      }
      row = std::move(nr);
    }
  }
  return T;
}

}  // namespace detail

inline Mat<FamilyElem> act_matrix(const SigmaMatrix& g, const FamilyWeight& fw, int N) {
  if (!g.in_monoid(fw.p)) throw NotInMonoid("act_matrix: matrix outside the monoid");
  return detail::moment_matrix_family(fw, g.a, g.b, g.c, g.d, N);
}

inline Mat<FamilyElem> dual_act_matrix(const SigmaMatrix& g, const FamilyWeight& fw, int N) {
  if (!g.in_monoid(fw.p)) throw NotInMonoid("dual_act_matrix: matrix outside the monoid");
  return detail::moment_matrix_family(fw, g.a, g.c, g.b, g.d, N);
}

inline bool is_contracting(const SigmaMatrix& g, long p) {
  return g.c % p == 0 && g.det() % p == 0 && g.a % p != 0;
}

// Column profile of the function-side matrix (transpose of act_matrix):
// entry j is the minimal valuation in column j over rows > j. For the
// contracting summands this certifies the p^j growth used by the truncation
// stability bound min(M, N).
template <class WeightT>
std::vector<int> compactness_profile(const SigmaMatrix& g, const WeightT& w, int N) {
  if (!is_contracting(g, w.p)) throw NotContracting("compactness_profile: matrix not contracting");
  auto T = act_matrix(g, w, N);
  std::vector<int> prof(N, kValInf);
  for (int j = 0; j < N; ++j)
    for (int i = j + 1; i < N; ++i) {
      int v;
      if constexpr (std::is_same_v<WeightT, FamilyWeight>)
        v = T.at(j, i).min_val();
      else
        v = T.at(j, i).val();
      prof[j] = std::min(prof[j], v);
    }
  return prof;
}

}  // namespace eigenslope
