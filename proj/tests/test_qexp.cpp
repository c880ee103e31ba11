#include <catch2/catch_amalgamated.hpp>

#include "eigenslope/qexp.hpp"

using namespace eigenslope;

TEST_CASE("delta coefficients") {
  EigenformQExp d = level1_eigenform(12, 30);
  CHECK(d.a[1] == 1);
  CHECK(d.a[2] == -24);
  CHECK(d.a[3] == 252);
  CHECK(d.a[5] == 4830);
  CHECK(d.a[7] == -16744);
  CHECK(d.a[6] == d.a[2] * d.a[3]);  // multiplicativity
}

TEST_CASE("weight 16") {
  EigenformQExp f = level1_eigenform(16, 20);
  CHECK(f.a[1] == 1);
  CHECK(f.a[2] == 216);
}

TEST_CASE("hecke action on expansions") {
  int B = 60;
  for (long k : {12L, 16L, 18L, 20L, 22L, 26L}) {
    EigenformQExp f = level1_eigenform(k, B);
    for (long ell : {2L, 3L, 5L}) {
      QSeries tf = hecke_tl(f.a, ell, k, B / static_cast<int>(ell));
      for (long n = 1; n <= B / ell; ++n) CHECK(tf[n] == f.a[ell] * f.a[n]);
    }
  }
}

TEST_CASE("hecke multiplicativity identities") {
  int B = 60;
  EigenformQExp f = level1_eigenform(12, B);
  // a_{mn} = a_m a_n for coprime m, n
  CHECK(f.a[15] == f.a[3] * f.a[5]);
  CHECK(f.a[10] == f.a[2] * f.a[5]);
  // a_{l^2} = a_l^2 - l^{k-1}
  mpz_class l11;
  mpz_ui_pow_ui(l11.get_mpz_t(), 2, 11);
  CHECK(f.a[4] == f.a[2] * f.a[2] - l11);
}

TEST_CASE("oracle table") {
  QExpOracleEntry e = qexp_eigenvalues(12, 12);
  CHECK(e.a_ell.at(2) == -24);
  CHECK(e.a_ell.at(3) == 252);
  CHECK(e.a_ell.at(5) == 4830);
  CHECK(e.a_ell.at(11) == 534612);
}
