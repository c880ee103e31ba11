#include <catch2/catch_amalgamated.hpp>

#include "eigenslope/weight.hpp"

#include <random>

using namespace eigenslope;

namespace {

SigmaMatrix random_sigma(std::mt19937_64& rng, long p) {
  while (true) {
    SigmaMatrix g{static_cast<long long>(rng() % 20) + 1, static_cast<long long>(rng() % 20) - 10,
                  p * (static_cast<long long>(rng() % 10) - 5), static_cast<long long>(rng() % 20) - 10};
    if (g.in_monoid(p)) return g;
  }
}

int entry_agreement(const Mat<PadicScalar>& A, const Mat<PadicScalar>& B, int cols) {
  int v = kValInf;
  for (int i = 0; i < A.m; ++i)
    for (int j = 0; j < cols; ++j) v = std::min(v, (A.at(i, j) - B.at(i, j)).val());
  return v;
}

}  // namespace

TEST_CASE("up summands") {
  auto v2 = up_summands(2);
  REQUIRE(v2.size() == 2);
  CHECK(v2[0].a == 1);
  CHECK(v2[0].b == 0);
  CHECK(v2[0].d == 2);
  CHECK(v2[1].b == 1);
  auto v3 = up_summands(3);
  REQUIRE(v3.size() == 3);
  for (auto& g : v3) CHECK(g.in_monoid(3));
}

TEST_CASE("identity and unipotent action") {
  WeightChar w{5, 25, 0, 0, 1};
  Mat<PadicScalar> I = act_matrix(SigmaMatrix{1, 0, 0, 1}, w, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(I.at(i, j).residue() == (i == j ? 1 : 0));

  // g = [[1,1],[0,1]], trivial weight, N=3: row j = coefficients of (x/(1+x))^j
  Mat<PadicScalar> T = act_matrix(SigmaMatrix{1, 1, 0, 1}, w, 3);
  CHECK(T.at(0, 0).residue() == 1);
  CHECK(T.at(1, 1).residue() == 1);
  CHECK((T.at(1, 2) + PadicScalar::one(5, 25)).is_zero_to_prec());  // x^2 coeff of x/(1+x) is -1
  CHECK(T.at(2, 2).residue() == 1);
}

TEST_CASE("central scalar acts by the sigma character") {
  WeightChar triv{7, 20, 0, 0, 1};
  // unit central element: action through lambda(sigma(z)) is trivial for trivial lambda
  Mat<PadicScalar> T = act_matrix(SigmaMatrix{3, 0, 0, 3}, triv, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(T.at(i, j).residue() == (i == j ? 1 : 0));
  // weight x^k picks up sigma(z)^k, and sigma kills p-powers
  WeightChar wk{7, 20, 4, 0, 1};
  CHECK(central_scalar(wk, WeightChar{7, 20, 0, 0, 1}, 7).residue() == 1);
  CHECK(central_scalar(wk, WeightChar{7, 20, 0, 0, 1}, 3).residue() ==
        PadicScalar::from_long(7, 20, 81).residue());
}

TEST_CASE("monoid anti-composition within the certified range") {
  std::mt19937_64 rng(5);
  for (long p : {2L, 3L, 5L}) {
    WeightChar w{p, 40, 4, 0, 1};
    int N = 16;
    for (int t = 0; t < 8; ++t) {
      SigmaMatrix g1 = random_sigma(rng, p);
      SigmaMatrix g2 = random_sigma(rng, p);
      Mat<PadicScalar> lhs = act_matrix(g1.mul(g2), w, N);
      Mat<PadicScalar> rhs = mat_mul(act_matrix(g1, w, N), act_matrix(g2, w, N));
      // truncation error sits in the last ceil(N/4) moment columns
      int cols = N - (N + 3) / 4;
      CHECK(entry_agreement(lhs, rhs, cols) >= (N + 3) / 4);
    }
  }
}

TEST_CASE("contracting pairs compose to full precision on early rows") {
  for (long p : {2L, 5L}) {
    WeightChar w{p, 30, 10, 0, 1};
    int N = 12;
    auto su = up_summands(p);
    Mat<PadicScalar> lhs = act_matrix(su[0].mul(su[1 % su.size()]), w, N);
    Mat<PadicScalar> rhs = mat_mul(act_matrix(su[0], w, N), act_matrix(su[1 % su.size()], w, N));
    int cols = N - (N + 3) / 4;
    CHECK(entry_agreement(lhs, rhs, cols) >= N - cols);
  }
}

TEST_CASE("lambda0 twist consistency") {
  long p = 5;
  WeightChar l1{p, 25, 6, 0, 1}, l2{p, 25, 2, 0, 1};
  SigmaMatrix g{2, 3, 5, 4};
  REQUIRE(g.in_monoid(p));
  int N = 8;
  Mat<PadicScalar> pair = act_matrix_pair(g, l1, l2, N);
  WeightChar l0{p, 25, 4, 0, 1};
  Mat<PadicScalar> twisted = mat_scale(act_matrix(g, l0, N), l2.eval_sigma(mpz_class(static_cast<long>(g.det()))));
  CHECK(entry_agreement(pair, twisted, N) >= 24);
}

TEST_CASE("compactness profile") {
  WeightChar w{2, 30, 0, 0, 1};
  auto prof = compactness_profile(SigmaMatrix{1, 0, 0, 2}, w, 10);
  for (int j = 0; j < 10; ++j) CHECK(prof[j] >= j);
  CHECK_THROWS_AS(compactness_profile(SigmaMatrix{1, 0, 0, 1}, w, 4), NotContracting);
}

TEST_CASE("family weight specializes to integer weights") {
  long p = 2;
  FamilyWeight fw(p, 40, 4, 10, 24);
  // center
  PadicScalar t0 = fw.t_for_weight(10);
  CHECK(t0.is_exact_zero());
  SigmaMatrix g{1, 1, 0, 2};
  int N = 10;
  Mat<FamilyElem> Tf = act_matrix(g, fw, N);
  WeightChar w10{p, 40, 10, 0, 1};
  Mat<PadicScalar> T10 = act_matrix(g, w10, N);
  int agree = kValInf;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) agree = std::min(agree, (Tf.at(i, j).specialize(t0) - T10.at(i, j)).val());
  CHECK(agree >= 30);

  // a nearby classical weight in the chart
  long k1 = 10 + (1L << (fw.rho + 1));
  PadicScalar t1 = fw.t_for_weight(k1);
  CHECK(t1.val() >= 1);
  WeightChar wk1{p, 40, k1, 0, 1};
  Mat<PadicScalar> Tk1 = act_matrix(g, wk1, N);
  int agree1 = kValInf;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      agree1 = std::min(agree1, (Tf.at(i, j).specialize(t1) - Tk1.at(i, j)).val());
  CHECK(agree1 >= 8);  // limited by the disc truncation W
}

TEST_CASE("family weight odd prime") {
  long p = 5;
  FamilyWeight fw(p, 30, 4, 2, 16);
  SigmaMatrix g{1, 2, 0, 5};
  int N = 8;
  Mat<FamilyElem> Tf = act_matrix(g, fw, N);
  WeightChar w2{p, 30, 2, 0, 1};
  Mat<PadicScalar> T2 = act_matrix(g, w2, N);
  PadicScalar t0 = fw.t_for_weight(2);
  int agree = kValInf;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) agree = std::min(agree, (Tf.at(i, j).specialize(t0) - T2.at(i, j)).val());
  CHECK(agree >= 25);
}
