#pragma once

#include <optional>
#include <vector>

#include "eigenslope/linalg.hpp"
#include "eigenslope/newton.hpp"

namespace eigenslope {

// Truncated entire series with constant term 1, over p-adic scalars or a
// weight-disc family ring. `certified` is the absolute p-precision certificate
// for the stored coefficients; `stable_degree` bounds the range certified
// independent of the source truncation.
template <class R>
struct FredholmSeriesT {
  long p = 2;
  int prec = 1;
  Poly<R> f;
  int certified = 0;
  int stable_degree = 0;

  int degree() const { return f.size() - 1; }
};
using FredholmSeries = FredholmSeriesT<PadicScalar>;
using FamilyFredholmSeries = FredholmSeriesT<FamilyElem>;

inline FredholmSeries make_fredholm(long p, int prec, Poly<PadicScalar> f, int certified = -1) {
  FredholmSeries F;
  F.p = p;
  F.prec = prec;
  F.f = std::move(f);
  F.certified = certified < 0 ? prec : certified;
  F.stable_degree = F.f.size() - 1;
  return F;
}

// Coefficient-wise evaluation at a point of the disc.
inline FredholmSeries specialize(const FamilyFredholmSeries& F, const PadicScalar& w0) {
  FredholmSeries out;
  out.p = F.p;
  out.prec = F.prec;
  out.certified = F.certified;
  out.stable_degree = F.stable_degree;
  out.f.c.reserve(F.f.size());
  for (const auto& c : F.f.c) out.f.c.push_back(c.specialize(w0));
  for (const auto& c : out.f.c)
    if (!c.is_exact_zero()) out.certified = std::min(out.certified, c.precision());
  return out;
}

// x^{deg Q} Q(1/x); monic when Q(0) = 1.
template <class R>
Poly<R> q_star(const Poly<R>& q) {
  if (q.size() == 0 || ring_is_zero(q.c[0])) throw MathError("q_star: constant term must be 1");
  return poly_reverse(q, q.degree());
}

template <class R>
struct SlopeFactorizationT {
  mpq_class h;
  Poly<R> Q;        // multiplicative, slopes <= h, Q(0) = 1
  Poly<R> R_part;   // slopes > h, R(0) = 1, degree D - deg Q
  int certified;    // p-precision of the recombination Q*R = F
};
using SlopeFactorization = SlopeFactorizationT<PadicScalar>;
using FamilySlopeFactorization = SlopeFactorizationT<FamilyElem>;

namespace detail {

// Solve the linearized recombination dQ*R + dR*Q = E (coefficients 1..D) for
// dQ of degree <= d and dR of degree <= D-d, by p-adic elimination.
struct SylvesterSolver {
  int D, d;
  PadicElim elim;

  SylvesterSolver(const Poly<PadicScalar>& Q, const Poly<PadicScalar>& Rp, int D_, int d_)
      : D(D_), d(d_) {
    PadicScalar zero = ring_zero(Q.c[0]);
    Mat<PadicScalar> A(D, D, zero);
    // unknowns: dq_1..dq_d, dr_1..dr_{D-d}; equations: coefficient n = 1..D
    for (int n = 1; n <= D; ++n) {
      for (int j = 1; j <= d; ++j) {
        int i = n - j;
        if (i >= 0 && i < Rp.size()) A.at(n - 1, j - 1) = Rp.c[i];
      }
      for (int j = 1; j <= D - d; ++j) {
        int i = n - j;
        if (i >= 0 && i < Q.size()) A.at(n - 1, d + j - 1) = Q.c[i];
      }
    }
    elim = padic_eliminate(A);
    if (elim.rank < D) throw NotSeparated("slope_factor: linearized system is singular");
  }

  // returns (dQ, dR)
  std::pair<Poly<PadicScalar>, Poly<PadicScalar>> solve(const Poly<PadicScalar>& E) const {
    PadicScalar zero = ring_zero(E.c[0]);
    std::vector<PadicScalar> b(D, zero);
    for (int n = 1; n <= D && n < E.size(); ++n) b[n - 1] = E.c[n];
    std::vector<PadicScalar> y = mat_apply(elim.L, b);
    std::vector<PadicScalar> z(D, zero);
    for (int i = 0; i < D; ++i) {
      int nu = elim.pivot_val[i];
      if (y[i].is_zero_to_prec()) {
        z[i] = PadicScalar::zero(y[i].prime(), std::max(1, y[i].precision() - nu));
        continue;
      }
      if (y[i].val() < nu) throw PrecisionExhausted("slope_factor: update not divisible by pivot");
      PadicScalar piv = elim.B.at(i, i);
      z[i] = y[i].div(piv);
    }
    std::vector<PadicScalar> x = mat_apply(elim.C, z);
    Poly<PadicScalar> dQ(std::vector<PadicScalar>(d + 1, zero));
    Poly<PadicScalar> dR(std::vector<PadicScalar>(D - d + 1, zero));
    for (int j = 1; j <= d; ++j) dQ.c[j] = x[j - 1];
    for (int j = 1; j <= D - d; ++j) dR.c[j] = x[d + j - 1];
    return {dQ, dR};
  }
};

inline int min_val_above0(const Poly<PadicScalar>& E) {
  int v = kValInf;
  for (int i = 1; i < E.size(); ++i) v = std::min(v, E.c[i].val());
  return v;
}

}  // namespace detail

// Slope-<=h factorization of the degree-D truncation, by a polygon split at
// the separating vertex followed by Newton lifting of the coefficient system.
inline SlopeFactorization slope_factor(const FredholmSeries& F, const mpq_class& h,
                                       std::optional<unsigned> shuffle_seed = std::nullopt) {
  (void)shuffle_seed;  // the solver is pivot-deterministic; seed kept for API parity
  int D = F.degree();
  if (!F.f.c[0].is_unit()) throw MathError("slope_factor: F(0) must be 1");
  NewtonPolygon np = newton_polygon(poly_trunc(F.f, D));
  long d_long = np.count_slopes_le(h);
  int d = static_cast<int>(d_long);
  if (np.total_length() < D && d >= np.total_length())
    throw InsufficientTruncation("slope_factor: polygon not certified past the break");
  if (d > F.stable_degree)
    throw InsufficientTruncation("slope_factor: break beyond the stable coefficient range");
  PadicScalar one = ring_one(F.f.c[0]);
  PadicScalar zero = ring_zero(F.f.c[0]);
  if (d == 0) {
    // all slopes above h
    for (auto& s : np.slopes)
      if (s.first <= h) throw SlopeNotAdapted("slope_factor: inconsistent polygon");
    SlopeFactorization out{h, Poly<PadicScalar>::constant(one), poly_trunc(F.f, D), F.certified};
    return out;
  }
  if (d == D) {
    SlopeFactorization out{h, poly_trunc(F.f, D), Poly<PadicScalar>::constant(one), F.certified};
    return out;
  }

  Poly<PadicScalar> Q = poly_trunc(F.f, d);
  Poly<PadicScalar> Rp = series_div(poly_trunc(F.f, D), Q, D - d);
  int last_resid = -1;
  for (int iter = 0; iter < 64; ++iter) {
    Poly<PadicScalar> prod = poly_mul(Q, Rp, D);
    Poly<PadicScalar> E = poly_sub(poly_trunc(F.f, D), prod);
    int resid = detail::min_val_above0(E);
    if (resid >= F.certified || resid >= F.prec) break;
    if (resid <= last_resid)
      throw PrecisionExhausted("slope_factor: lifting stalled before certification");
    last_resid = resid;
    detail::SylvesterSolver solver(Q, Rp, D, d);
    auto [dQ, dR] = solver.solve(E);
    Q = poly_add(Q, dQ);
    Rp = poly_add(Rp, dR);
  }
  Poly<PadicScalar> prod = poly_mul(Q, Rp, D);
  Poly<PadicScalar> E = poly_sub(poly_trunc(F.f, D), prod);
  int certified = std::min(F.certified, detail::min_val_above0(E));
  if (certified < 1) throw PrecisionExhausted("slope_factor: no certified digits");

  // split check: all polygon slopes of Q <= h, first slope of R > h
  NewtonPolygon nq = newton_polygon(Q);
  for (auto& s : nq.slopes)
    if (s.first > h) throw SlopeNotAdapted("slope_factor: slope leaked into Q");
  if (D - d >= 1) {
    NewtonPolygon nr = newton_polygon(Rp);
    for (auto& s : nr.slopes)
      if (s.first <= h) throw SlopeNotAdapted("slope_factor: slope leaked into R");
  }
  return SlopeFactorization{h, Q, Rp, certified};
}

// Family slope factorization: factor at the disc center, check the conservative
// vertex-stability criterion, then lift grade by grade in the disc variable.
inline FamilySlopeFactorization slope_factor(const FamilyFredholmSeries& F, const mpq_class& h) {
  int D = F.degree();
  int W = F.f.c[0].W;
  // center series
  Poly<PadicScalar> f0(std::vector<PadicScalar>{});
  for (auto& c : F.f.c) f0.c.push_back(c.center());
  FredholmSeries F0 = make_fredholm(F.p, F.prec, f0, F.certified);
  F0.stable_degree = F.stable_degree;
  NewtonPolygon np = newton_polygon(poly_trunc(f0, D));
  long d = np.count_slopes_le(h);
  // hull values at each abscissa for the perturbation criterion
  auto hull_at = [&](long x) -> mpq_class {
    for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
      if (np.vertices[i].x <= x && x <= np.vertices[i + 1].x) {
        mpq_class t(x - np.vertices[i].x, np.vertices[i + 1].x - np.vertices[i].x);
        t.canonicalize();
        return np.vertices[i].y + t * (np.vertices[i + 1].y - np.vertices[i].y);
      }
    }
    return np.vertices.empty() ? mpq_class(0) : np.vertices.back().y;
  };
  for (int i = 0; i <= D; ++i) {
    const FamilyElem& c = F.f.c[i];
    long hull_floor;
    {
      mpq_class hv = hull_at(i);
      hull_floor = static_cast<long>(mpz_class(hv.get_num() / hv.get_den()).get_si());
      if (hv < 0) hull_floor = 0;
      // ceil for the comparison v >= hull value
      mpq_class fl(hull_floor);
      if (fl < hv) ++hull_floor;
    }
    if (i > static_cast<int>(np.total_length())) break;
    for (int j = 1; j < W; ++j) {
      if (c.c[j].val() < hull_floor)
        throw SlopeNotAdapted("slope_factor: disc perturbation dips below the center polygon");
    }
  }
  SlopeFactorization base = slope_factor(F0, h);
  int dq = base.Q.degree();
  (void)d;

  FamilyRing fr{F.p, F.prec, W};
  FamilyElem fzero = FamilyElem::zero(fr);
  Poly<FamilyElem> Qf(std::vector<FamilyElem>(dq + 1, fzero));
  Poly<FamilyElem> Rf(std::vector<FamilyElem>(D - dq + 1, fzero));
  for (int i = 0; i <= dq; ++i) Qf.c[i].c[0] = base.Q.c[i];
  for (int i = 0; i <= D - dq; ++i) Rf.c[i].c[0] = base.R_part.c[i];
  int certified = base.certified;
  if (dq > 0 && dq < D) {
    detail::SylvesterSolver solver(base.Q, base.R_part, D, dq);
    for (int g = 1; g < W; ++g) {
      // grade-g equation: Q0*Rg + R0*Qg = Fg - sum_{0<i<g} Qi*R_{g-i}
      Poly<PadicScalar> rhs(std::vector<PadicScalar>(D + 1, ring_zero(base.Q.c[0])));
      for (int n = 0; n <= D; ++n) rhs.c[n] = F.f.c[n].c[g];
      for (int i = 1; i < g; ++i) {
        Poly<PadicScalar> qi(std::vector<PadicScalar>{}), rj(std::vector<PadicScalar>{});
        for (int t = 0; t <= dq; ++t) qi.c.push_back(Qf.c[t].c[i]);
        for (int t = 0; t <= D - dq; ++t) rj.c.push_back(Rf.c[t].c[g - i]);
        rhs = poly_sub(rhs, poly_mul(qi, rj, D));
      }
      auto [dQ, dR] = solver.solve(rhs);
      for (int t = 1; t <= dq; ++t) Qf.c[t].c[g] = dQ.c[t];
      for (int t = 1; t <= D - dq; ++t) Rf.c[t].c[g] = dR.c[t];
      for (int t = 1; t <= dq; ++t)
        if (!dQ.c[t].is_exact_zero()) certified = std::min(certified, dQ.c[t].precision());
    }
  } else {
    // trivial split: copy the family series into the corresponding factor
    if (dq == D)
      for (int i = 0; i <= D; ++i) Qf.c[i] = F.f.c[i];
    else
      for (int i = 0; i <= D; ++i) Rf.c[i] = F.f.c[i];
  }
  Qf.c[0] = FamilyElem::one(fr);
  Rf.c[0] = FamilyElem::one(fr);
  // recombination residual over the family ring
  {
    Poly<FamilyElem> prod = poly_mul(Qf, Rf, D);
    for (int n = 1; n <= D; ++n) {
      FamilyElem e = F.f.c[n] - prod.c[n];
      certified = std::min(certified, e.min_val());
    }
  }
  if (certified < 1) throw PrecisionExhausted("slope_factor: family lift lost all digits");
  return FamilySlopeFactorization{h, Qf, Rf, certified};
}

// Riesz data for a matrix with char series F = Q*R: the projector onto the
// slope-<=h part and the inverse of the operator there, via the Bezout
// identity between Q* and the complementary reversed factor.
struct RieszData {
  Mat<PadicScalar> projector;
  Mat<PadicScalar> inverse_on_image;  // -a^{-1} r(u), u restricted inverse
  int rank;
  int certified;
};

namespace detail {

// extended euclid for monic-leading p-adic polynomials; returns (g, s, t) with
// s A + t B = g, g a unit scalar when A, B are coprime to working precision
inline std::tuple<Poly<PadicScalar>, Poly<PadicScalar>, Poly<PadicScalar>> padic_xgcd(
    Poly<PadicScalar> A, Poly<PadicScalar> B) {
  PadicScalar one = ring_one(A.c[0]);
  PadicScalar zero = ring_zero(A.c[0]);
  Poly<PadicScalar> s0 = Poly<PadicScalar>::constant(one), s1 = Poly<PadicScalar>::constant(zero);
  Poly<PadicScalar> t0 = Poly<PadicScalar>::constant(zero), t1 = Poly<PadicScalar>::constant(one);
  auto degree_of = [](const Poly<PadicScalar>& f) {
    for (int i = f.size() - 1; i >= 0; --i)
      if (!f.c[i].is_zero_to_prec()) return i;
    return -1;
  };
  while (true) {
    int db = degree_of(B);
    if (db < 0) break;
    if (db == 0) {
      A = B;
      s0 = s1;
      t0 = t1;
      B = Poly<PadicScalar>::constant(zero);
      break;
    }
    int da = degree_of(A);
    if (da < db) {
      std::swap(A, B);
      std::swap(s0, s1);
      std::swap(t0, t1);
      continue;
    }
    // divide A by B: requires lead(B) of minimal valuation among its top; we
    // divide exactly and let PrecisionExhausted surface if the pivot is bad
    PadicScalar lb = B.c[db];
    Poly<PadicScalar> q(std::vector<PadicScalar>(da - db + 1, zero));
    Poly<PadicScalar> rem = A;
    for (int i = da; i >= db; --i) {
      PadicScalar li = rem.size() > i ? rem.c[i] : zero;
      if (li.is_zero_to_prec()) continue;
      PadicScalar f = li.div(lb);
      q.c[i - db] = f;
      for (int j = 0; j <= db; ++j) rem.c[i - db + j] = rem.c[i - db + j] - f * B.c[j];
    }
    Poly<PadicScalar> ns = poly_sub(s0, poly_mul(q, s1));
    Poly<PadicScalar> nt = poly_sub(t0, poly_mul(q, t1));
    A = B;
    B = rem;
    s0 = s1;
    s1 = ns;
    t0 = t1;
    t1 = nt;
  }
  return {A, s0, t0};
}

template <class R>
Mat<R> poly_of_matrix(const Poly<R>& f, const Mat<R>& A) {
  Mat<R> acc(A.m, A.n, ring_zero(A.a[0]));
  for (int i = f.size() - 1; i >= 0; --i) {
    acc = mat_mul(acc, A);
    for (int k = 0; k < A.m; ++k) acc.at(k, k) = acc.at(k, k) + f.c[i];
  }
  return acc;
}

}  // namespace detail

inline RieszData riesz_projector(const Mat<PadicScalar>& A, const Poly<PadicScalar>& Q,
                                 const Poly<PadicScalar>& Rpart) {
  int n = A.m;
  int d = Q.degree();
  Poly<PadicScalar> Qs = q_star(Q);
  // complementary reversed factor: monic of degree n - d with constant term
  // matching; char poly of A factors as Q* times R* after reversal
  Poly<PadicScalar> Rs = poly_reverse(poly_trunc(Rpart, n - d), n - d);
  auto [g, s, t] = detail::padic_xgcd(Qs, Rs);
  if (g.degree() != 0 || g.c[0].is_zero_to_prec())
    throw NotSeparated("riesz_projector: slope factors share a root to working precision");
  PadicScalar ginv = g.c[0].rshift(g.c[0].val()).inv();
  int sep_loss = g.c[0].val();
  // e = t(A) R*(A) / g : equals 1 mod Q*, 0 mod R*
  Poly<PadicScalar> tR = poly_mul(t, Rs);
  Mat<PadicScalar> e = detail::poly_of_matrix(tR, A);
  for (auto& x : e.a) {
    if (x.is_zero_to_prec()) {
      x = PadicScalar::zero(x.prime(), std::max(1, x.precision() - sep_loss));
      continue;
    }
    if (x.val() < sep_loss) throw NotSeparated("riesz_projector: projector entries not divisible");
    x = x.div(g.c[0]);
  }
  // inverse on the image: Q*(x) = a + x r(x) with a = Q*(0); u^{-1} = -a^{-1} r(u)
  PadicScalar a0 = Qs.c[0];
  if (a0.is_zero_to_prec()) throw PrecisionExhausted("riesz_projector: Q*(0) is zero to precision");
  Poly<PadicScalar> r(std::vector<PadicScalar>(Qs.c.begin() + 1, Qs.c.end()));
  Mat<PadicScalar> rU = detail::poly_of_matrix(r, A);
  Mat<PadicScalar> inv(n, n, ring_zero(A.a[0]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PadicScalar x = rU.at(i, j);
      if (x.is_zero_to_prec()) {
        inv.at(i, j) = PadicScalar::zero(x.prime(), std::max(1, x.precision() - a0.val()));
        continue;
      }
      if (x.val() < a0.val())
        throw PrecisionExhausted("riesz_projector: inverse requires dividing below precision");
      inv.at(i, j) = (PadicScalar::zero(x.prime(), x.precision()) - x).div(a0);
    }
  int certified = kValInf;
  for (auto& x : e.a)
    if (!x.is_exact_zero()) certified = std::min(certified, x.precision());
  for (auto& x : inv.a)
    if (!x.is_exact_zero()) certified = std::min(certified, x.precision());
  return RieszData{e, inv, d, certified == kValInf ? 0 : certified};
}

}  // namespace eigenslope
