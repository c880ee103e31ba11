#include <catch2/catch_amalgamated.hpp>

#include "eigenslope/symbols.hpp"

using namespace eigenslope;

namespace {
long count_slope(const std::vector<mpq_class>& v, const mpq_class& s) {
  long c = 0;
  for (auto& x : v)
    if (x == s) ++c;
  return c;
}
}  // namespace

TEST_CASE("classical slopes weight 12") {
  // p = 2: stabilized eigenvalues are the roots of X^2 + 24X + 2^11,
  // valuations {3, 8}, each with the two sign copies
  auto s2 = classical_slopes(2, 12);
  CHECK(count_slope(s2, 3) == 2);
  CHECK(count_slope(s2, 8) == 2);
  // p = 5: v_5(4830) = 1
  auto s5 = classical_slopes(5, 12);
  CHECK(count_slope(s5, 1) == 2);
}

TEST_CASE("classical slopes weight 2 level 11") {
  auto s = classical_slopes(11, 2);
  CHECK(!s.empty());
}

TEST_CASE("overconvergent trivial weight has the ordinary class") {
  WeightChar w{2, 30, 0, 0, 1};
  SymbolSpace S(w, 4);
  FredholmSeries F = fredholm_series(S, 3, false);
  NewtonPolygon np = newton_polygon(poly_trunc(F.f, F.f.degree()));
  auto sl = np.slope_list();
  CHECK(count_slope(sl, 0) >= 1);
}

TEST_CASE("overconvergent weight 10 p=2 cuspidal slope 3") {
  WeightChar w{2, 60, 10, 0, 1};
  SymbolSpace S(w, 40);
  FredholmSeries F = fredholm_series(S, 20, false);
  NewtonPolygon np = newton_polygon(poly_trunc(F.f, F.f.degree()));
  auto sl = np.slope_list();
  // least positive slope 3, multiplicity 2
  mpq_class least(-1);
  for (auto& s : sl)
    if (s > 0 && (least < 0 || s < least)) least = s;
  CHECK(least == 3);
  CHECK(count_slope(sl, 3) == 2);
}

TEST_CASE("fredholm stability under moment increase") {
  WeightChar w{2, 40, 10, 0, 1};
  SymbolSpace S1(w, 24);
  SymbolSpace S2(w, 34);
  FredholmSeries F1 = fredholm_series(S1, 8, false);
  FredholmSeries F2 = fredholm_series(S2, 8, false);
  for (int i = 0; i <= 8; ++i) {
    CHECK((F1.f.c[i] - F2.f.c[i]).val() >= std::min(40, 24));
  }
}

TEST_CASE("control theorem p=3 weight 10 h=3") {
  ControlOptions opt;
  opt.N = 30;
  opt.prec = 40;
  opt.D = 12;
  opt.verify_stability = false;
  ControlReport r = control_check(3, 10, mpq_class(3), opt);
  CHECK(r.pass);
  CHECK(count_slope(r.overconvergent, 2) == 2);
}

TEST_CASE("control rejects bounds past the small-slope threshold") {
  ControlOptions opt;
  opt.N = 8;
  opt.prec = 20;
  opt.D = 4;
  opt.verify_stability = false;
  CHECK_THROWS_AS(control_check(2, 10, mpq_class(12), opt), InsufficientTruncation);
}
