#include <catch2/catch_amalgamated.hpp>

#include "eigenslope/linalg.hpp"
#include "eigenslope/newton.hpp"
#include "eigenslope/padic.hpp"
#include "eigenslope/poly.hpp"

#include <random>

using namespace eigenslope;

static PadicScalar ps(long p, int M, long v) { return PadicScalar::from_long(p, M, v); }

TEST_CASE("valuation basics") {
  CHECK(ps(2, 60, -24).val() == 3);
  CHECK(ps(5, 20, 1).val() == 0);
  CHECK(PadicScalar::zero(3, 20).val() == kValInf);
  CHECK(PadicScalar::zero(3, 20).is_exact_zero());
  // zero to precision is not exact zero
  PadicScalar z = ps(3, 5, 243);  // 3^5
  CHECK(z.is_zero_to_prec());
  CHECK(!z.is_exact_zero());
  CHECK(z.val() == 5);
}

TEST_CASE("arithmetic valuation laws") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    long p = std::vector<long>{2, 3, 5}[t % 3];
    int M = 40;
    long xa = static_cast<long>(rng() % 10000) + 1;
    long xb = static_cast<long>(rng() % 10000) + 1;
    PadicScalar x = ps(p, M, xa), y = ps(p, M, xb);
    PadicScalar xy = x * y;
    if (x.val() + y.val() < M) CHECK(xy.val() == x.val() + y.val());
    PadicScalar s = x + y;
    CHECK(s.val() >= std::min(x.val(), y.val()));
  }
}

TEST_CASE("division and shifts") {
  PadicScalar x = ps(5, 10, 250);  // 2 * 5^3
  CHECK(x.val() == 3);
  PadicScalar y = x.rshift(3);
  CHECK(y.val() == 0);
  CHECK(y.precision() == 7);
  PadicScalar u = ps(5, 10, 7);
  PadicScalar q = x.div(u);
  CHECK((q * u - x).is_zero_to_prec());
}

TEST_CASE("newton polygon examples") {
  // 1 - 6X + 5X^2 at p=5: vertices (0,0),(1,0),(2,1); slopes {0,1}
  Poly<PadicScalar> f(std::vector<PadicScalar>{ps(5, 30, 1), ps(5, 30, -6), ps(5, 30, 5)});
  NewtonPolygon np = newton_polygon(f);
  REQUIRE(np.vertices.size() == 3);
  CHECK(np.vertices[1].x == 1);
  auto sl = np.slope_list();
  REQUIRE(sl.size() == 2);
  CHECK(sl[0] == 0);
  CHECK(sl[1] == 1);

  // 1 + X + 3X^3 at p=3: slopes {0, 1/2, 1/2}
  Poly<PadicScalar> g(std::vector<PadicScalar>{ps(3, 30, 1), ps(3, 30, 1), PadicScalar::zero(3, 30),
                                               ps(3, 30, 3)});
  NewtonPolygon ng = newton_polygon(g);
  auto sg = ng.slope_list();
  REQUIRE(sg.size() == 3);
  CHECK(sg[0] == 0);
  CHECK(sg[1] == rat(1, 2));
  CHECK(sg[2] == rat(1, 2));

  // 1 + X at p=2: slopes {0}
  Poly<PadicScalar> h(std::vector<PadicScalar>{ps(2, 30, 1), ps(2, 30, 1)});
  CHECK(newton_polygon(h).slope_list() == std::vector<mpq_class>{mpq_class(0)});
}

TEST_CASE("ambiguous vertex raises") {
  // trailing coefficient zero to precision leaves the final hull vertex unpinned
  Poly<PadicScalar> f(std::vector<PadicScalar>{ps(3, 12, 1), ps(3, 12, 3), ps(3, 12, 531441)});
  CHECK_THROWS_AS(newton_polygon(f), AmbiguousVertex);
  // an interior coefficient that is strictly above the certified hull is harmless
  Poly<PadicScalar> g(std::vector<PadicScalar>{ps(3, 4, 1), ps(3, 4, 81), ps(3, 4, 9)});
  CHECK(newton_polygon(g).slope_list() == std::vector<mpq_class>{rat(1, 1), rat(1, 1)});
}

TEST_CASE("polygon multiplicativity on random products") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    long p = std::vector<long>{2, 3, 5}[t % 3];
    int M = 50;
    auto rnd_poly = [&](int deg) {
      std::vector<PadicScalar> c;
      c.push_back(ps(p, M, 1 + static_cast<long>(rng() % (p - 1 ? p - 1 : 1))));
      for (int i = 1; i <= deg; ++i) {
        long val = static_cast<long>(rng() % 4);
        long unit = 1 + static_cast<long>(rng() % 50);
        while (unit % p == 0) ++unit;
        long coeff = unit;
        for (long v = 0; v < val; ++v) coeff *= p;
        c.push_back(ps(p, M, coeff));
      }
      return Poly<PadicScalar>(c);
    };
    Poly<PadicScalar> f = rnd_poly(2 + static_cast<int>(rng() % 3));
    Poly<PadicScalar> g = rnd_poly(2 + static_cast<int>(rng() % 3));
    auto sf = newton_polygon(f).slope_list();
    auto sg = newton_polygon(g).slope_list();
    auto sfg = newton_polygon(poly_mul(f, g)).slope_list();
    std::vector<mpq_class> expect = sf;
    expect.insert(expect.end(), sg.begin(), sg.end());
    std::sort(expect.begin(), expect.end());
    std::sort(sfg.begin(), sfg.end());
    CHECK(sfg == expect);
  }
}

TEST_CASE("char poly of small matrices") {
  long p = 3;
  int M = 30;
  PadicScalar z = PadicScalar::zero(p, M);
  // A = 0 (2x2) -> det(1-XA) = 1
  Mat<PadicScalar> A(2, 2, z);
  Poly<PadicScalar> f = fredholm_det(A);
  CHECK(f.c[0].residue() == 1);
  CHECK(f.c[1].is_zero_to_prec());
  CHECK(f.c[2].is_zero_to_prec());

  // A = diag(1, p) -> 1 - (1+p)X + pX^2
  Mat<PadicScalar> B(2, 2, z);
  B.at(0, 0) = ps(p, M, 1);
  B.at(1, 1) = ps(p, M, p);
  Poly<PadicScalar> g = fredholm_det(B);
  CHECK((g.c[1] + ps(p, M, 1 + p)).is_zero_to_prec());
  CHECK((g.c[2] - ps(p, M, p)).is_zero_to_prec());

  // companion matrix of X^2 - aX - b -> det(1 - XA) = 1 - aX - bX^2
  long a = 7, b = 5;
  Mat<PadicScalar> C(2, 2, z);
  C.at(0, 1) = ps(p, M, b);
  C.at(1, 0) = ps(p, M, 1);
  C.at(1, 1) = ps(p, M, a);
  Poly<PadicScalar> h = fredholm_det(C);
  CHECK((h.c[1] + ps(p, M, a)).is_zero_to_prec());
  CHECK((h.c[2] + ps(p, M, b)).is_zero_to_prec());
}

TEST_CASE("char poly conjugation invariance") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    long p = std::vector<long>{2, 5, 7}[t % 3];
    int M = 25;
    int n = 3 + static_cast<int>(rng() % 2);
    PadicScalar z = PadicScalar::zero(p, M);
    Mat<PadicScalar> A(n, n, z);
    for (auto& x : A.a) x = ps(p, M, static_cast<long>(rng() % 1000));
    // random unimodular P: identity plus strictly triangular noise
    Mat<PadicScalar> P = Mat<PadicScalar>::identity(n, z);
    Mat<PadicScalar> Pinv = Mat<PadicScalar>::identity(n, z);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        long c = static_cast<long>(rng() % 100);
        P.at(i, j) = ps(p, M, c);
        Pinv.at(i, j) = ps(p, M, -c);
      }
    // (I+T)(I-T) = I - T^2; correct to a true inverse by Newton step
    Mat<PadicScalar> I = Mat<PadicScalar>::identity(n, z);
    for (int it = 0; it < 6; ++it) {
      Mat<PadicScalar> E = mat_sub(I, mat_mul(P, Pinv));
      bool done = true;
      for (auto& x : E.a)
        if (!x.is_zero_to_prec()) done = false;
      if (done) break;
      Pinv = mat_add(Pinv, mat_mul(Pinv, E));
    }
    Mat<PadicScalar> B = mat_mul(P, mat_mul(A, Pinv));
    Poly<PadicScalar> fa = fredholm_det(A), fb = fredholm_det(B);
    for (int i = 0; i <= n; ++i) CHECK((fa.c[i] - fb.c[i]).val() >= M - 1);
  }
}

TEST_CASE("padic kernel and restriction") {
  long p = 5;
  int M = 20;
  PadicScalar z = PadicScalar::zero(p, M);
  // A kills (1, -1, 0) and (0, 2, -1)
  Mat<PadicScalar> A(1, 3, z);
  A.at(0, 0) = ps(p, M, 1);
  A.at(0, 1) = ps(p, M, 1);
  A.at(0, 2) = ps(p, M, 2);
  PadicElim e = padic_eliminate(A);
  CHECK(e.rank == 1);
  CHECK(e.kernel_dim() == 2);
  Mat<PadicScalar> K = e.kernel_basis();
  Mat<PadicScalar> AK = mat_mul(A, K);
  for (auto& x : AK.a) CHECK(x.is_zero_to_prec());
}
