#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "eigenslope/padic.hpp"

namespace eigenslope {

// Integer q-expansions a_0..a_B (index = exponent of q).
using QSeries = std::vector<mpz_class>;

inline QSeries qs_mul(const QSeries& a, const QSeries& b, int B) {
  QSeries r(B + 1, 0);
  for (int i = 0; i <= B && i < static_cast<int>(a.size()); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= B && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

inline mpz_class sigma_k(long n, long k) {
  mpz_class s = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_class dk, ek;
    mpz_ui_pow_ui(dk.get_mpz_t(), d, k);
    s += dk;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(ek.get_mpz_t(), e, k);
      s += ek;
    }
  }
  return s;
}

inline QSeries eisenstein_e4(int B) {
  QSeries e(B + 1, 0);
  e[0] = 1;
  for (long n = 1; n <= B; ++n) e[n] = 240 * sigma_k(n, 3);
  return e;
}

inline QSeries eisenstein_e6(int B) {
  QSeries e(B + 1, 0);
  e[0] = 1;
  for (long n = 1; n <= B; ++n) e[n] = -504 * sigma_k(n, 5);
  return e;
}

// delta = q prod (1-q^n)^24
inline QSeries delta_qexp(int B) {
  QSeries eta(B + 1, 0);
  eta[0] = 1;
  for (long n = 1; n <= B; ++n) {
    QSeries f(B + 1, 0);
    f[0] = 1;
    if (n <= B) f[n] = -1;
    eta = qs_mul(eta, f, B);
    // (1-q^n)^24 via repeated squaring would churn; 24 sequential mults on
    // sparse factors is cheaper at these sizes
    for (int t = 1; t < 24; ++t) eta = qs_mul(eta, f, B);
  }
  QSeries d(B + 1, 0);
  for (int n = 0; n + 1 <= B; ++n) d[n + 1] = eta[n];
  return d;
}

struct EigenformQExp {
  std::string id;
  long weight;  // classical weight
  QSeries a;    // a[n] = n-th coefficient, a[1] = 1

  mpz_class hecke_eigenvalue(long ell) const {
    if (ell <= 0 || ell >= static_cast<long>(a.size()))
      throw MathError("EigenformQExp: coefficient out of range");
    return a[ell];
  }
};

// Normalized level-one cuspidal eigenforms for the one-dimensional weights.
inline EigenformQExp level1_eigenform(long k, int B) {
  QSeries d = delta_qexp(B);
  QSeries f;
  std::string id;
  switch (k) {
    case 12:
      f = d;
      id = "delta";
      break;
    case 16:
      f = qs_mul(d, eisenstein_e4(B), B);
      id = "delta_e4";
      break;
    case 18:
      f = qs_mul(d, eisenstein_e6(B), B);
      id = "delta_e6";
      break;
    case 20:
      f = qs_mul(d, qs_mul(eisenstein_e4(B), eisenstein_e4(B), B), B);
      id = "delta_e4^2";
      break;
    case 22:
      f = qs_mul(d, qs_mul(eisenstein_e4(B), eisenstein_e6(B), B), B);
      id = "delta_e4_e6";
      break;
    case 26:
      f = qs_mul(qs_mul(d, eisenstein_e6(B), B), qs_mul(eisenstein_e4(B), eisenstein_e4(B), B), B);
      id = "delta_e4^2_e6";
      break;
    default:
      throw MathError("level1_eigenform: cusp space not one-dimensional at this weight");
  }
  return {id, k, f};
}

// T_ell on weight-k level-one expansions: (T_ell f)_n = a_{n ell} + ell^{k-1} a_{n/ell}.
inline QSeries hecke_tl(const QSeries& f, long ell, long k, int B) {
  long src = static_cast<long>(f.size()) - 1;
  if (static_cast<long>(B) * ell > src) throw MathError("hecke_tl: source expansion too short");
  QSeries r(B + 1, 0);
  mpz_class lk;
  mpz_ui_pow_ui(lk.get_mpz_t(), ell, k - 1);
  for (long n = 0; n <= B; ++n) {
    r[n] = f[n * ell];
    if (n % ell == 0) r[n] += lk * f[n / ell];
  }
  return r;
}

struct QExpOracleEntry {
  std::string form_id;
  long weight;
  std::map<long, mpz_class> a_ell;  // prime-indexed table
};

inline QExpOracleEntry qexp_eigenvalues(long k, int B) {
  EigenformQExp f = level1_eigenform(k, B);
  QExpOracleEntry e{f.id, k, {}};
  for (long ell = 2; ell <= B; ++ell) {
    bool prime = ell >= 2;
    for (long d = 2; d * d <= ell; ++d)
      if (ell % d == 0) {
        prime = false;
        break;
      }
    if (prime) e.a_ell[ell] = f.a[ell];
  }
  return e;
}

}  // namespace eigenslope
