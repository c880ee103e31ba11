#pragma once

#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include "eigenslope/weight.hpp"

namespace eigenslope {

// Presentation of the module of maps from degree-zero cusp divisors to a
// coefficient module with level-Gamma0(p) equivariance. Generators are indexed
// by the p+1 cosets of Gamma0(p) in SL2(Z); relations come from the order-2 and
// order-3 identities on the standard path {0}-{oo}; the controlling operator is
// transported through continued-fraction unimodular paths. Every coefficient
// matrix that appears lies in the monoid (lower-left entry divisible by p).
struct ManinPresentation {
  long p;
  int n_gens;                         // p + 1
  std::vector<SigmaMatrix> coset_rep;  // g_x, bottom row covering P^1(F_p)

  struct RelTerm {
    int gen;
    SigmaMatrix gamma_inv;  // term contributes S(gamma_inv) m_gen, right action
  };
  std::vector<std::vector<RelTerm>> relations;

  struct UTerm {
    int src;  // generator whose new value receives this term
    int dst;  // generator it reads
    int sign;
    SigmaMatrix beta;       // contracting coset summand
    SigmaMatrix gamma_inv;  // transport back to a generator
  };
  std::vector<UTerm> u_terms;
};

namespace detail {

inline int coset_index(long p, long long c, long long d) {
  long long cc = ((c % p) + p) % p;
  long long dd = ((d % p) + p) % p;
  if (dd != 0) {
    // (c : d) = (c d^{-1} : 1)
    long long dinv = 1;
    for (long long t = 1; t < p; ++t)
      if ((dd * t) % p == 1) {
        dinv = t;
        break;
      }
    return static_cast<int>((cc * dinv) % p);
  }
  return static_cast<int>(p);  // (1 : 0)
}

inline int coset_of(long p, const SigmaMatrix& g) { return coset_index(p, g.c, g.d); }

// Unimodular path list for {r} - {oo} with r = P/Q in lowest terms:
// {r} - {oo} = - sum_k h_k D0 over the convergent matrices h_k.
inline void convergents_path(long long P, long long Q, std::vector<std::pair<int, SigmaMatrix>>& out) {
  // continued fraction of P/Q by floor division; Q > 0
  long long p2 = 0, q2 = 1;  // p_{-2}, q_{-2}
  long long p1 = 1, q1 = 0;  // p_{-1}, q_{-1}
  long long A = P, B = Q;
  int k = 0;
  while (B != 0) {
    long long a = A / B;
    if ((A % B != 0) && ((A < 0) != (B < 0))) --a;  // floor
    long long r = A - a * B;
    long long pk = a * p1 + p2;
    long long qk = a * q1 + q2;
    // h_k = [[p_k, s*p_{k-1}],[q_k, s*q_{k-1}]], s = (-1)^{k-1}, det 1
    long long s = (k % 2 == 0) ? -1 : 1;
    out.push_back({-1, SigmaMatrix{pk, s * p1, qk, s * q1}});
    p2 = p1;
    q2 = q1;
    p1 = pk;
    q1 = qk;
    A = B;
    B = r;
    ++k;
  }
}

// {r} - {s} with cusps given as columns (num, den); den = 0 encodes infinity.
inline std::vector<std::pair<int, SigmaMatrix>> manin_path(long long rn, long long rd, long long sn,
                                                           long long sd) {
  std::vector<std::pair<int, SigmaMatrix>> out;
  auto normalize = [](long long& n, long long& d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  };
  if (rd != 0) {
    normalize(rn, rd);
    convergents_path(rn, rd, out);
  }
  if (sd != 0) {
    normalize(sn, sd);
    size_t base = out.size();
    convergents_path(sn, sd, out);
    for (size_t i = base; i < out.size(); ++i) out[i].first = -out[i].first;
  }
  return out;
}

}  // namespace detail

inline ManinPresentation build_presentation(long p) {
  ManinPresentation pres;
  pres.p = p;
  pres.n_gens = static_cast<int>(p) + 1;
  pres.coset_rep.resize(pres.n_gens);
  for (long j = 0; j < p; ++j) pres.coset_rep[j] = SigmaMatrix{1, 0, j, 1};   // (j : 1)
  pres.coset_rep[p] = SigmaMatrix{0, -1, 1, 0};                               // (1 : 0)
  for (int x = 0; x < pres.n_gens; ++x)
    if (detail::coset_of(p, pres.coset_rep[x]) != x) throw MathError("build_presentation: coset table");

  const SigmaMatrix sg{0, -1, 1, 0};   // order 4, acts as order 2 on even weights
  const SigmaMatrix tau{0, -1, 1, -1};  // order 3

  // h = gamma g_y with gamma in Gamma0(p); in the right-action convention
  // phi(h D0) = phi(g_y D0) | gamma^{-1}, so we record gamma^{-1} = g_y h^{-1}.
  auto transport = [&](const SigmaMatrix& h) -> std::pair<int, SigmaMatrix> {
    int y = detail::coset_of(p, h);
    SigmaMatrix gamma_inv = pres.coset_rep[y].mul(h.adjugate());
    if (gamma_inv.c % p != 0 || gamma_inv.det() != 1)
      throw MathError("build_presentation: transport left the group");
    return {y, gamma_inv};
  };

  // one relation per orbit of the coset permutation
  std::vector<bool> seen(pres.n_gens, false);
  for (int x = 0; x < pres.n_gens; ++x) {
    if (seen[x]) continue;
    SigmaMatrix gx = pres.coset_rep[x];
    SigmaMatrix gxs = gx.mul(sg);
    auto [y, ginv] = transport(gxs);
    seen[x] = true;
    seen[y] = true;
    std::vector<ManinPresentation::RelTerm> rel;
    rel.push_back({x, SigmaMatrix{1, 0, 0, 1}});
    rel.push_back({y, ginv});
    pres.relations.push_back(std::move(rel));
  }
  std::fill(seen.begin(), seen.end(), false);
  for (int x = 0; x < pres.n_gens; ++x) {
    if (seen[x]) continue;
    SigmaMatrix gx = pres.coset_rep[x];
    SigmaMatrix gxt = gx.mul(tau);
    SigmaMatrix gxtt = gxt.mul(tau);
    auto [y1, g1] = transport(gxt);
    auto [y2, g2] = transport(gxtt);
    seen[x] = true;
    seen[y1] = true;
    seen[y2] = true;
    std::vector<ManinPresentation::RelTerm> rel;
    rel.push_back({x, SigmaMatrix{1, 0, 0, 1}});
    rel.push_back({y1, g1});
    rel.push_back({y2, g2});
    pres.relations.push_back(std::move(rel));
  }

  // Controlling-operator transport: (phi | U)(G_x) = sum_a phi(beta_a g_x D0) | beta_a
  // over the coset summands beta_a = [[1,a],[0,p]].
  for (int x = 0; x < pres.n_gens; ++x) {
    SigmaMatrix gx = pres.coset_rep[x];
    for (const SigmaMatrix& beta : up_summands(p)) {
      SigmaMatrix bg = beta.mul(gx);
      // path {bg . 0} - {bg . oo} = {b/d} - {a/c}
      auto terms = detail::manin_path(bg.b, bg.d, bg.a, bg.c);
      for (auto& [sign, h] : terms) {
        auto [y, ginv] = transport(h);
        pres.u_terms.push_back({x, y, sign, beta, ginv});
      }
    }
  }
  return pres;
}

// Assemble block matrices over any coefficient scalar, given an action hook
// g -> N x N matrix. Caching keyed on the matrix entries keeps the number of
// series expansions proportional to the number of distinct transports.
template <class R, class Act>
struct BlockAssembler {
  const ManinPresentation& pres;
  Act act;
  int N;
  std::map<std::tuple<long long, long long, long long, long long>, Mat<R>> cache;

  const Mat<R>& matrix_of(const SigmaMatrix& g) {
    auto key = std::make_tuple(g.a, g.b, g.c, g.d);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, act(g)).first;
    return it->second;
  }

  Mat<R> relation_matrix() {
    const Mat<R>& id = matrix_of(SigmaMatrix{1, 0, 0, 1});
    R zero = ring_zero(id.a[0]);
    int rows = static_cast<int>(pres.relations.size()) * N;
    int cols = pres.n_gens * N;
    Mat<R> Rm(rows, cols, zero);
    for (size_t r = 0; r < pres.relations.size(); ++r) {
      for (const auto& term : pres.relations[r]) {
        const Mat<R>& T = matrix_of(term.gamma_inv);
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j)
            Rm.at(static_cast<int>(r) * N + i, term.gen * N + j) =
                Rm.at(static_cast<int>(r) * N + i, term.gen * N + j) + T.at(i, j);
      }
    }
    return Rm;
  }

  Mat<R> up_matrix() {
    const Mat<R>& id = matrix_of(SigmaMatrix{1, 0, 0, 1});
    R zero = ring_zero(id.a[0]);
    int dim = pres.n_gens * N;
    Mat<R> U(dim, dim, zero);
    for (const auto& t : pres.u_terms) {
      Mat<R> prod = mat_mul(matrix_of(t.beta), matrix_of(t.gamma_inv));
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          R v = prod.at(i, j);
          if (t.sign < 0) v = zero - v;
          U.at(t.src * N + i, t.dst * N + j) = U.at(t.src * N + i, t.dst * N + j) + v;
        }
    }
    return U;
  }
};

}  // namespace eigenslope
