#pragma once

#include <algorithm>
#include <sstream>
#include <vector>

#include "eigenslope/fredholm.hpp"
#include "eigenslope/manin.hpp"
#include "eigenslope/qexp.hpp"

namespace eigenslope {

// det(1 - XA) mod X^{D+1} through traces of powers: n c_n = -sum tr(A^m) c_{n-m}.
// Division is by the integer n only, so the p-adic loss on c_n is v_p(n) plus
// carried terms; everything else is ring arithmetic.
template <class R>
Poly<R> fredholm_det_trunc(const Mat<R>& A, int D, long p_for_div) {
  R one = ring_one(A.a[0]);
  R zero = ring_zero(A.a[0]);
  Poly<R> c(std::vector<R>{one});
  if (D == 0) return c;
  std::vector<R> tr(D + 1, zero);
  Mat<R> P = A;
  tr[1] = mat_trace(P);
  for (int m = 2; m <= D; ++m) {
    P = mat_mul(P, A);
    tr[m] = mat_trace(P);
  }
  c.c.resize(D + 1, zero);
  for (int n = 1; n <= D; ++n) {
    R acc = zero;
    for (int m = 1; m <= n; ++m) acc = acc + tr[m] * c.c[n - m];
    acc = zero - acc;
    if constexpr (std::is_same_v<R, mpq_class>) {
      (void)p_for_div;
      c.c[n] = acc / n;
    } else if constexpr (std::is_same_v<R, PadicScalar>) {
      c.c[n] = acc.div(PadicScalar::from_long(acc.prime(), acc.precision(), n));
    } else {
      // family ring: divide each grade
      FamilyElem e = acc;
      for (auto& x : e.c)
        if (!x.is_exact_zero()) x = x.div(PadicScalar::from_long(x.prime(), x.precision(), n));
      c.c[n] = e;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Overconvergent symbol data at a scalar weight. The operator lives on the
// free generator-moment module; its Fredholm determinant is the object all
// slope readings run through. Slopes of the actual symbol quotient are
// recovered below the small-slope bound by cancelling the coefficient-free
// part against the exact classical computation (the complement of the symbol
// module is functorial in the coefficients, so its small slopes agree).
// ---------------------------------------------------------------------------
struct SymbolSpace {
  WeightChar weight;
  int N;
  ManinPresentation pres;

  Mat<PadicScalar> U_full;  // operator on the free generator-moment module
  bool built_ = false;

  SymbolSpace(const WeightChar& w, int N_) : weight(w), N(N_), pres(build_presentation(w.p)) {
    if (w.k % 2 != 0 || (w.eps_pow % w.tame_order()) % 2 != 0)
      throw MathError("SymbolSpace: odd weights act nontrivially through -1");
  }

  long p() const { return weight.p; }
  int dim_full() const { return pres.n_gens * N; }

  void build() {
    if (built_) return;
    auto act = [&](const SigmaMatrix& g) { return dual_act_matrix(g, weight, N); };
    BlockAssembler<PadicScalar, decltype(act)> asmb{pres, act, N, {}};
    U_full = asmb.up_matrix();
    built_ = true;
  }
};

inline Mat<PadicScalar> up_matrix(SymbolSpace& S) {
  S.build();
  return S.U_full;
}

// Truncated Fredholm determinant of the controlling operator. Dropping moments
// >= N changes every coefficient at valuation >= N (the perturbation rows carry
// p^{N-j} against columns carrying p^{i}), so coefficients are certified mod
// p^{min(M,N)} less the Newton-identity divisions; optionally re-verified by
// recomputation at N+10.
inline FredholmSeries fredholm_series(SymbolSpace& S, int D, bool verify_stability = false) {
  S.build();
  if (D > S.dim_full())
    throw InsufficientMoments("fredholm_series: truncation degree beyond the module dimension");
  Poly<PadicScalar> f = fredholm_det_trunc(S.U_full, D, S.p());
  int cert = std::min(S.weight.prec, S.N);
  for (auto& c : f.c)
    if (!c.is_exact_zero()) cert = std::min(cert, c.precision());
  FredholmSeries F = make_fredholm(S.p(), S.weight.prec, f, cert);
  F.stable_degree = D;
  if (verify_stability) {
    SymbolSpace S2(S.weight, S.N + 10);
    FredholmSeries F2 = fredholm_series(S2, D, false);
    int agree = F.certified;
    for (int i = 0; i <= D; ++i) {
      PadicScalar dlt = F.f.c[i] - F2.f.c[i];
      agree = std::min(agree, dlt.val());
    }
    F.certified = std::min(F.certified, agree);
    if (F.certified < 1)
      throw InsufficientMoments("fredholm_series: no stable digits at this moment count");
  }
  for (auto& c : F.f.c)
    if (!c.is_exact_zero()) c = c.with_precision(std::min(c.precision(), F.certified));
  return F;
}

// ---------------------------------------------------------------------------
// Family version over the weight disc.
// ---------------------------------------------------------------------------
struct FamilySymbolSpace {
  FamilyWeight weight;
  int N;
  ManinPresentation pres;

  Mat<FamilyElem> U_full;
  bool built_ = false;

  FamilySymbolSpace(const FamilyWeight& w, int N_)
      : weight(w), N(N_), pres(build_presentation(w.p)) {
    if (w.k_center % 2 != 0) throw MathError("FamilySymbolSpace: odd center weight");
  }

  long p() const { return weight.p; }
  int W() const { return weight.W; }
  int dim_full() const { return pres.n_gens * N; }

  void build() {
    if (built_) return;
    auto act = [&](const SigmaMatrix& g) { return dual_act_matrix(g, weight, N); };
    BlockAssembler<FamilyElem, decltype(act)> asmb{pres, act, N, {}};
    U_full = asmb.up_matrix();
    built_ = true;
  }
};

inline FamilyFredholmSeries fredholm_series(FamilySymbolSpace& S, int D) {
  S.build();
  if (D > S.dim_full())
    throw InsufficientMoments("fredholm_series: truncation degree beyond the module dimension");
  Poly<FamilyElem> f = fredholm_det_trunc(S.U_full, D, S.p());
  FamilyFredholmSeries F;
  F.p = S.p();
  F.prec = S.weight.prec;
  F.f = f;
  F.certified = std::min(S.weight.prec, S.N);
  for (auto& c : F.f.c) {
    int mp = c.min_precision();
    if (mp != kValInf) F.certified = std::min(F.certified, mp);
  }
  F.stable_degree = D;
  return F;
}

// ---------------------------------------------------------------------------
// Classical (exact rational) symbol spaces: the independent oracle. Both the
// full generator-moment determinant and the genuine symbol determinant are
// exact here, which pins down the coefficient-free complement factor.
// ---------------------------------------------------------------------------
struct ClassicalSymbolSpace {
  long p;
  long k_classical;  // classical weight, coefficients Sym^{k-2}
  ManinPresentation pres;
  Mat<mpq_class> U_full;
  Mat<mpq_class> basis;
  Mat<mpq_class> U_restr;
  bool built_ = false;

  ClassicalSymbolSpace(long p_, long k) : p(p_), k_classical(k), pres(build_presentation(p_)) {
    if (k < 2 || k % 2 != 0) throw MathError("ClassicalSymbolSpace: weight must be even and >= 2");
  }

  int N() const { return static_cast<int>(k_classical) - 1; }

  void build() {
    if (built_) return;
    long kc = k_classical - 2;
    auto act = [&](const SigmaMatrix& g) { return dual_act_matrix_classical(g, kc); };
    BlockAssembler<mpq_class, decltype(act)> asmb{pres, act, N(), {}};
    Mat<mpq_class> Rm = asmb.relation_matrix();
    U_full = asmb.up_matrix();
    QKernel K = q_kernel(Rm);
    basis = K.basis;
    U_restr = q_restrict(basis, U_full, "ClassicalSymbolSpace");
    built_ = true;
  }

  int dim() {
    build();
    return basis.n;
  }
};

inline std::vector<mpq_class> classical_slopes(long p, long k_classical) {
  ClassicalSymbolSpace S(p, k_classical);
  S.build();
  Poly<mpq_class> f = fredholm_det(S.U_restr);
  NewtonPolygon np = newton_polygon(f, p);
  return np.slope_list();
}

inline std::vector<mpq_class> classical_full_slopes(long p, long k_classical) {
  ClassicalSymbolSpace S(p, k_classical);
  S.build();
  Poly<mpq_class> f = fredholm_det(S.U_full);
  NewtonPolygon np = newton_polygon(f, p);
  return np.slope_list();
}

// Slopes of the complement of the symbol module inside the generator-moment
// module, exact at classical weight k; below the small-slope bound k-1 these
// agree with the overconvergent complement at weight x^{k-2}.
inline std::vector<mpq_class> classical_complement_slopes(long p, long k_classical) {
  std::vector<mpq_class> full = classical_full_slopes(p, k_classical);
  std::vector<mpq_class> symb = classical_slopes(p, k_classical);
  std::sort(full.begin(), full.end());
  std::sort(symb.begin(), symb.end());
  std::vector<mpq_class> out;
  size_t i = 0;
  for (auto& s : full) {
    if (i < symb.size() && symb[i] == s) {
      ++i;
      continue;
    }
    out.push_back(s);
  }
  if (i != symb.size()) throw MathError("classical_complement_slopes: symbol factor does not divide");
  return out;
}

// A priori coefficient bound for det(1 - XU) when the columns of U at moment
// index i are divisible by p^i and each moment occurs in n_blocks generator
// copies: every n-by-n minor carries at least the sum of the n smallest
// available column indices.
inline long column_minor_floor(long n, int n_blocks) {
  long total = 0, taken = 0, idx = 0;
  while (taken < n) {
    long chunk = std::min<long>(n_blocks, n - taken);
    total += idx * chunk;
    taken += chunk;
    ++idx;
  }
  return total;
}

// The certified polygon prefix of a truncated series, and the strict slope
// bound ("reach") below which its slope multiset is provably complete. The
// hull is taken over the certified coefficients together with lower-bound
// points for everything unknown (zero-to-precision coefficients, and the
// column floor for coefficients beyond the truncation); it is cut at the
// first lower-bound vertex, whose incoming slope bounds every continuation.
struct CertifiedSlopes {
  NewtonPolygon prefix;
  bool complete;    // every slope of the series is in the prefix
  mpq_class reach;  // strict completeness bound (meaningful when !complete)

  std::vector<mpq_class> below(const mpq_class& h) const {
    std::vector<mpq_class> out;
    for (auto& s : prefix.slopes)
      if (s.first < h)
        for (long i = 0; i < s.second; ++i) out.push_back(s.first);
    return out;
  }
};

inline CertifiedSlopes certified_slopes(const FredholmSeries& F, int n_blocks, int dim_full) {
  int D = F.degree();
  bool series_complete = D >= dim_full;
  std::vector<PolygonPoint> pts;
  for (int i = 0; i <= D; ++i) {
    const auto& c = F.f.c[i];
    long floor_i = column_minor_floor(i, n_blocks);
    if (c.is_exact_zero() || c.is_zero_to_prec()) {
      long lb = std::max<long>(F.certified, floor_i);
      pts.push_back({i, mpq_class(lb), true});
    } else {
      pts.push_back({i, mpq_class(c.val()), false});
    }
  }
  if (!series_complete) {
    // continuation of the entire series, bounded below by the column floor
    long xmax = 3L * D + 24;
    for (long x = D + 1; x <= std::min<long>(xmax, dim_full); ++x)
      pts.push_back({x, mpq_class(column_minor_floor(x, n_blocks)), true});
  }
  CertifiedSlopes cs;
  std::vector<int> hull = detail::hull_indices(pts);
  size_t cut = hull.size();
  for (size_t t = 0; t < hull.size(); ++t)
    if (pts[hull[t]].lower_bound_only) {
      cut = t;
      break;
    }
  cs.prefix = detail::polygon_from(pts, hull, cut);
  cs.complete = (cut == hull.size());
  if (!cs.complete) {
    // slope of the segment entering the first lower-bound vertex
    const auto& a = cut > 0 ? pts[hull[cut - 1]] : pts[hull[0]];
    const auto& b = pts[hull[cut]];
    cs.reach = (b.y - a.y) / mpq_class(b.x - a.x);
    cs.reach.canonicalize();
  } else {
    cs.reach = 0;
  }
  return cs;
}

// Slopes strictly below h; throws when the certified prefix cannot vouch for
// completeness below h.
inline std::vector<mpq_class> slopes_below(const FredholmSeries& F, const mpq_class& h,
                                           int n_blocks, int dim_full) {
  CertifiedSlopes cs = certified_slopes(F, n_blocks, dim_full);
  if (!cs.complete && cs.reach < h)
    throw InsufficientTruncation("slopes_below: polygon not certified past the bound");
  return cs.below(h);
}

// multiset difference a \ b; throws if b is not contained in a
inline std::vector<mpq_class> multiset_subtract(std::vector<mpq_class> a, std::vector<mpq_class> b,
                                                const char* what) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<mpq_class> out;
  size_t i = 0;
  for (auto& s : a) {
    if (i < b.size() && b[i] == s) {
      ++i;
      continue;
    }
    out.push_back(s);
  }
  if (i != b.size()) throw MathError(std::string(what) + ": multiset difference undefined");
  return out;
}

struct SlopeReport {
  long p;
  long k;  // weight exponent
  std::vector<mpq_class> module_slopes;      // polygon of det(1 - X up_matrix), below bound
  std::vector<mpq_class> complement_slopes;  // exact classical complement, below bound
  std::vector<mpq_class> symbol_slopes;      // the difference: the symbol-space slopes
  mpq_class bound;                           // small-slope certification bound used
  int certified;
};

struct SlopeOptions {
  int N = 40;
  int prec = 60;
  int D = 20;
  bool verify_stability = true;
};

// Symbol-space slopes below the reporting bound: the module polygon with the
// exact classical complement multiset cancelled. The bound is the part of the
// small-slope range the truncation certifies: min(k+1, certified reach).
inline SlopeReport symbol_slopes(long p, long k, const SlopeOptions& opt = {}) {
  WeightChar w{p, opt.prec, k, 0, 1};
  SymbolSpace S(w, opt.N);
  FredholmSeries F = fredholm_series(S, opt.D, opt.verify_stability);
  CertifiedSlopes cs = certified_slopes(F, S.pres.n_gens, S.dim_full());
  mpq_class bound(k + 1);
  if (!cs.complete && cs.reach < bound) bound = cs.reach;
  if (bound <= 0)
    throw InsufficientTruncation("symbol_slopes: no certified positive-slope range");
  std::vector<mpq_class> module_slopes = cs.below(bound);
  std::vector<mpq_class> comp_all = classical_complement_slopes(p, k + 2);
  std::vector<mpq_class> comp;
  for (auto& s : comp_all)
    if (s < bound) comp.push_back(s);
  std::vector<mpq_class> symb = multiset_subtract(module_slopes, comp, "symbol_slopes");
  return SlopeReport{p, k, module_slopes, comp, symb, bound, F.certified};
}

struct ControlReport {
  long p;
  long k;  // weight exponent (classical weight k+2)
  mpq_class h;
  std::vector<mpq_class> overconvergent;
  std::vector<mpq_class> classical;
  bool pass;
  int certified;
};

using ControlOptions = SlopeOptions;

// Control comparison: the full-module slope multisets below h agree exactly,
// since the symbol parts match by the control theorem and the complement parts
// are functorial in the coefficient module.
inline ControlReport control_check(long p, long k, const mpq_class& h,
                                   const ControlOptions& opt = {}) {
  if (h >= mpq_class(k + 1))
    throw InsufficientTruncation(
        "control_check: bound must stay below the small-slope threshold k+1");
  WeightChar w{p, opt.prec, k, 0, 1};
  SymbolSpace S(w, opt.N);
  FredholmSeries F = fredholm_series(S, opt.D, opt.verify_stability);
  std::vector<mpq_class> over = slopes_below(F, h, S.pres.n_gens, S.dim_full());
  std::vector<mpq_class> cls_all = classical_full_slopes(p, k + 2);
  std::vector<mpq_class> cls;
  for (auto& s : cls_all)
    if (s < h) cls.push_back(s);
  std::sort(over.begin(), over.end());
  std::sort(cls.begin(), cls.end());
  return ControlReport{p, k, h, over, cls, over == cls, F.certified};
}

}  // namespace eigenslope
