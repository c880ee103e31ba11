#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "eigenslope/family.hpp"
#include "eigenslope/poly.hpp"

namespace eigenslope {

template <class R>
struct Mat {
  int m = 0, n = 0;
  std::vector<R> a;

  Mat() = default;
  Mat(int m_, int n_, const R& fill) : m(m_), n(n_), a(static_cast<size_t>(m_) * n_, fill) {}

  R& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const R& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

  static Mat identity(int k, const R& sample) {
    Mat I(k, k, ring_zero(sample));
    for (int i = 0; i < k; ++i) I.at(i, i) = ring_one(sample);
    return I;
  }

  Mat transpose() const {
    Mat t(n, m, a.empty() ? R() : ring_zero(a[0]));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) t.at(j, i) = at(i, j);
    return t;
  }
};

template <class R>
Mat<R> mat_mul(const Mat<R>& A, const Mat<R>& B) {
  Mat<R> C(A.m, B.n, ring_zero(A.a[0]));
  for (int i = 0; i < A.m; ++i)
    for (int k = 0; k < A.n; ++k) {
      const R& aik = A.at(i, k);
      if (ring_is_zero(aik)) continue;
      for (int j = 0; j < B.n; ++j) C.at(i, j) = C.at(i, j) + aik * B.at(k, j);
    }
  return C;
}

template <class R>
Mat<R> mat_add(const Mat<R>& A, const Mat<R>& B) {
  Mat<R> C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = C.a[i] + B.a[i];
  return C;
}

template <class R>
Mat<R> mat_sub(const Mat<R>& A, const Mat<R>& B) {
  Mat<R> C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = C.a[i] - B.a[i];
  return C;
}

template <class R>
Mat<R> mat_scale(const Mat<R>& A, const R& s) {
  Mat<R> C = A;
  for (auto& x : C.a) x = x * s;
  return C;
}

template <class R>
std::vector<R> mat_apply(const Mat<R>& A, const std::vector<R>& v) {
  std::vector<R> r(A.m, ring_zero(A.a[0]));
  for (int i = 0; i < A.m; ++i)
    for (int j = 0; j < A.n; ++j)
      if (!ring_is_zero(A.at(i, j))) r[i] = r[i] + A.at(i, j) * v[j];
  return r;
}

template <class R>
R mat_trace(const Mat<R>& A) {
  R t = ring_zero(A.a[0]);
  for (int i = 0; i < A.m; ++i) t = t + A.at(i, i);
  return t;
}

// Berkowitz division-free characteristic polynomial: returns c with
// det(tI - A) = sum c[i] t^{n-i}, c[0] = 1. Valid over any commutative ring.
template <class R>
std::vector<R> berkowitz_charpoly(const Mat<R>& A) {
  int n = A.m;
  R zero = ring_zero(A.a.empty() ? R() : A.a[0]);
  R one = A.a.empty() ? R() : ring_one(A.a[0]);
  if (n == 0) return {one};
  std::vector<R> p{one, zero - A.at(0, 0)};
  for (int r = 1; r < n; ++r) {
    // column S = A[0..r-1][r], row Rrow = A[r][0..r-1], corner = A[r][r]
    std::vector<R> S(r), Rrow(r);
    for (int i = 0; i < r; ++i) S[i] = A.at(i, r);
    for (int j = 0; j < r; ++j) Rrow[j] = A.at(r, j);
    // first column of the Toeplitz operator: [1, -corner, -R*S, -R*A1*S, ...]
    std::vector<R> col(r + 2, zero);
    col[0] = one;
    col[1] = zero - A.at(r, r);
    std::vector<R> v = S;
    for (int k = 2; k <= r + 1; ++k) {
      R dot = zero;
      for (int i = 0; i < r; ++i) dot = dot + Rrow[i] * v[i];
      col[k] = zero - dot;
      if (k <= r) {
        std::vector<R> nv(r, zero);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j)
            if (!ring_is_zero(A.at(i, j))) nv[i] = nv[i] + A.at(i, j) * v[j];
        v = nv;
      }
    }
    std::vector<R> q(r + 2, zero);
    for (int i = 0; i <= r + 1; ++i)
      for (int j = 0; j <= static_cast<int>(p.size()) - 1 && i - j >= 0 && i - j <= r + 1; ++j) {
        // q[i] += col[i-j] * p[j]
        if (i - j < static_cast<int>(col.size()) && j < static_cast<int>(p.size()))
          q[i] = q[i] + col[i - j] * p[j];
      }
    p = std::move(q);
  }
  return p;
}

// det(1 - X A) as a polynomial of degree <= n: coefficient i is the char-poly
// coefficient c_i (with sign), since X^n det(1/X I - A) = det(1 - XA).
template <class R>
Poly<R> fredholm_det(const Mat<R>& A, int trunc = -1) {
  std::vector<R> c = berkowitz_charpoly(A);
  Poly<R> f(std::move(c));
  if (trunc >= 0) f = poly_trunc(f, trunc);
  return f;
}

// ---------------------------------------------------------------------------
// p-adic elimination with valuation pivoting. Maintains B = L*A*C with L, C
// invertible; pivots are the diagonal of B after `rank` steps. Column data is
// enough to read off a kernel basis and restrict operators to it.
// ---------------------------------------------------------------------------
struct PadicElim {
  Mat<PadicScalar> B;     // reduced matrix
  Mat<PadicScalar> L;     // row transform (m x m)
  Mat<PadicScalar> C;     // column transform (n x n)
  Mat<PadicScalar> Cinv;  // inverse of C
  std::vector<int> pivot_val;
  int rank = 0;
  int max_pivot_val = 0;
  int stop_val = kValInf;  // least valuation left unpivoted

  int kernel_dim() const { return C.n - rank; }

  // Columns rank..n-1 of C span the kernel of A (to working precision).
  Mat<PadicScalar> kernel_basis() const {
    Mat<PadicScalar> K(C.m, kernel_dim(), ring_zero(C.a[0]));
    for (int i = 0; i < C.m; ++i)
      for (int j = 0; j < kernel_dim(); ++j) K.at(i, j) = C.at(i, rank + j);
    return K;
  }
};

// Eliminates pivots of valuation <= pivot_threshold; anything deeper is left
// in place and counted into the kernel. Callers working with truncated modules
// use a small threshold so that truncation noise never masquerades as rank.
inline PadicElim padic_eliminate(const Mat<PadicScalar>& A, int pivot_threshold = kValInf) {
  PadicElim e;
  e.B = A;
  PadicScalar sample = A.a.empty() ? PadicScalar::one(2, 1) : A.a[0];
  e.L = Mat<PadicScalar>::identity(A.m, sample);
  e.C = Mat<PadicScalar>::identity(A.n, sample);
  e.Cinv = Mat<PadicScalar>::identity(A.n, sample);
  int steps = std::min(A.m, A.n);
  for (int k = 0; k < steps; ++k) {
    // locate min-valuation pivot in the trailing block
    int bi = -1, bj = -1;
    long bw = kValInf;
    for (int i = k; i < e.B.m; ++i)
      for (int j = k; j < e.B.n; ++j) {
        const auto& x = e.B.at(i, j);
        if (x.is_zero_to_prec()) continue;
        if (x.val() < bw) {
          bw = x.val();
          bi = i;
          bj = j;
        }
      }
    if (bi >= 0 && bw > pivot_threshold) {
      e.stop_val = static_cast<int>(bw);
      break;
    }
    if (bi < 0) break;  // remaining block is zero to precision
    if (bi != k) {
      for (int j = 0; j < e.B.n; ++j) std::swap(e.B.at(k, j), e.B.at(bi, j));
      for (int j = 0; j < e.L.n; ++j) std::swap(e.L.at(k, j), e.L.at(bi, j));
    }
    if (bj != k) {
      for (int i = 0; i < e.B.m; ++i) std::swap(e.B.at(i, k), e.B.at(i, bj));
      for (int i = 0; i < e.C.m; ++i) std::swap(e.C.at(i, k), e.C.at(i, bj));
      for (int j = 0; j < e.Cinv.n; ++j) std::swap(e.Cinv.at(k, j), e.Cinv.at(bj, j));
    }
    PadicScalar piv = e.B.at(k, k);
    int nu = piv.val();
    e.pivot_val.push_back(nu);
    e.max_pivot_val = std::max(e.max_pivot_val, nu);
    PadicScalar uinv = piv.rshift(nu).inv();
    for (int i = k + 1; i < e.B.m; ++i) {
      const auto& x = e.B.at(i, k);
      if (x.is_zero_to_prec()) continue;
      PadicScalar f = x.rshift(nu) * uinv;  // exact: pivot has minimal valuation
      for (int j = k; j < e.B.n; ++j) e.B.at(i, j) = e.B.at(i, j) - f * e.B.at(k, j);
      for (int j = 0; j < e.L.n; ++j) e.L.at(i, j) = e.L.at(i, j) - f * e.L.at(k, j);
    }
    for (int j = k + 1; j < e.B.n; ++j) {
      const auto& x = e.B.at(k, j);
      if (x.is_zero_to_prec()) continue;
      PadicScalar g = x.rshift(nu) * uinv;
      for (int i = k; i < e.B.m; ++i) e.B.at(i, j) = e.B.at(i, j) - g * e.B.at(i, k);
      for (int i = 0; i < e.C.m; ++i) e.C.at(i, j) = e.C.at(i, j) - g * e.C.at(i, k);
      for (int jj = 0; jj < e.Cinv.n; ++jj) e.Cinv.at(k, jj) = e.Cinv.at(k, jj) + g * e.Cinv.at(j, jj);
    }
    ++e.rank;
  }
  return e;
}

// Column-echelon elimination processing rows in a caller-chosen order (rows of
// decreasing precision first, so poorly known rows cannot infect well known
// coordinates). Only column operations are performed; the kernel is read off
// the columns of C that never acquired a pivot.
struct GradedElim {
  Mat<PadicScalar> E;     // A * C, one surviving entry per pivoted row
  Mat<PadicScalar> C;     // column transform
  Mat<PadicScalar> Cinv;  // inverse of C
  struct Pivot {
    int row, col, val;
  };
  std::vector<Pivot> pivots;
  std::vector<char> is_pivot_col;

  int kernel_dim() const { return C.n - static_cast<int>(pivots.size()); }
  std::vector<int> free_cols() const {
    std::vector<int> f;
    for (int j = 0; j < C.n; ++j)
      if (!is_pivot_col[j]) f.push_back(j);
    return f;
  }
  Mat<PadicScalar> kernel_basis() const {
    std::vector<int> f = free_cols();
    Mat<PadicScalar> K(C.m, static_cast<int>(f.size()), ring_zero(C.a[0]));
    for (int i = 0; i < C.m; ++i)
      for (size_t j = 0; j < f.size(); ++j) K.at(i, static_cast<int>(j)) = C.at(i, f[j]);
    return K;
  }
};

inline GradedElim graded_eliminate(const Mat<PadicScalar>& A, const std::vector<int>& row_order) {
  GradedElim e;
  e.E = A;
  PadicScalar sample = A.a.empty() ? PadicScalar::one(2, 1) : A.a[0];
  e.C = Mat<PadicScalar>::identity(A.n, sample);
  e.Cinv = Mat<PadicScalar>::identity(A.n, sample);
  e.is_pivot_col.assign(A.n, 0);
  for (int r : row_order) {
    int bc = -1;
    long bw = kValInf;
    for (int j = 0; j < e.E.n; ++j) {
      if (e.is_pivot_col[j]) continue;
      const auto& x = e.E.at(r, j);
      if (x.is_zero_to_prec()) continue;
      if (x.val() < bw) {
        bw = x.val();
        bc = j;
      }
    }
    if (bc < 0) continue;  // row carries no usable constraint
    PadicScalar piv = e.E.at(r, bc);
    int nu = piv.val();
    PadicScalar uinv = piv.rshift(nu).inv();
    // clear the row on non-pivot columns only; entries over earlier pivot
    // columns remain, leaving E triangular along the pivot order
    for (int j = 0; j < e.E.n; ++j) {
      if (j == bc || e.is_pivot_col[j]) continue;
      const auto& x = e.E.at(r, j);
      if (x.is_zero_to_prec()) continue;
      PadicScalar g = x.rshift(nu) * uinv;  // exact: pivot is row-minimal
      for (int i = 0; i < e.E.m; ++i) e.E.at(i, j) = e.E.at(i, j) - g * e.E.at(i, bc);
      for (int i = 0; i < e.C.m; ++i) e.C.at(i, j) = e.C.at(i, j) - g * e.C.at(i, bc);
      for (int jj = 0; jj < e.Cinv.n; ++jj)
        e.Cinv.at(bc, jj) = e.Cinv.at(bc, jj) + g * e.Cinv.at(j, jj);
    }
    e.is_pivot_col[bc] = 1;
    e.pivots.push_back({r, bc, nu});
  }
  return e;
}

// ---------------------------------------------------------------------------
// Exact rational kernel/restriction (classical oracle path).
// ---------------------------------------------------------------------------
struct QKernel {
  Mat<mpq_class> basis;  // n x k
  int rank = 0;
};

inline QKernel q_kernel(const Mat<mpq_class>& A) {
  Mat<mpq_class> B = A;
  int m = B.m, n = B.n;
  std::vector<int> pivot_col;
  int r = 0;
  for (int j = 0; j < n && r < m; ++j) {
    int piv = -1;
    for (int i = r; i < m; ++i)
      if (B.at(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int jj = 0; jj < n; ++jj) std::swap(B.at(r, jj), B.at(piv, jj));
    mpq_class inv = 1 / B.at(r, j);
    for (int jj = 0; jj < n; ++jj) B.at(r, jj) *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || B.at(i, j) == 0) continue;
      mpq_class f = B.at(i, j);
      for (int jj = 0; jj < n; ++jj) B.at(i, jj) -= f * B.at(r, jj);
    }
    pivot_col.push_back(j);
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  QKernel K;
  K.rank = r;
  int kd = n - r;
  K.basis = Mat<mpq_class>(n, kd, mpq_class(0));
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    K.basis.at(j, col) = 1;
    for (int i = 0; i < r; ++i) K.basis.at(pivot_col[i], col) = -B.at(i, j);
    ++col;
  }
  return K;
}

// Solve B x = y where the columns of B are independent; throws if inconsistent.
inline Mat<mpq_class> q_restrict(const Mat<mpq_class>& basis, const Mat<mpq_class>& U,
                                 const char* what) {
  Mat<mpq_class> UB = mat_mul(U, basis);
  int n = basis.m, k = basis.n;
  // solve basis * T = UB column by column via one elimination of [basis | UB]
  Mat<mpq_class> Aug(n, k + k, mpq_class(0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) Aug.at(i, j) = basis.at(i, j);
    for (int j = 0; j < k; ++j) Aug.at(i, k + j) = UB.at(i, j);
  }
  int r = 0;
  std::vector<int> prow;
  for (int j = 0; j < k && r < n; ++j) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (Aug.at(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw MathError(std::string(what) + ": basis columns dependent");
    if (piv != r)
      for (int jj = 0; jj < 2 * k; ++jj) std::swap(Aug.at(r, jj), Aug.at(piv, jj));
    mpq_class inv = 1 / Aug.at(r, j);
    for (int jj = 0; jj < 2 * k; ++jj) Aug.at(r, jj) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == r || Aug.at(i, j) == 0) continue;
      mpq_class f = Aug.at(i, j);
      for (int jj = 0; jj < 2 * k; ++jj) Aug.at(i, jj) -= f * Aug.at(r, jj);
    }
    prow.push_back(r);
    ++r;
  }
  for (int i = r; i < n; ++i)
    for (int j = 0; j < k; ++j)
      if (Aug.at(i, k + j) != 0) throw PresentationError(std::string(what) + ": operator leaves the space");
  Mat<mpq_class> T(k, k, mpq_class(0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) T.at(i, j) = Aug.at(i, k + j);
  return T;
}

}  // namespace eigenslope
