#pragma once

#include "ncx/scenarios.hpp"
#include "ncx/spectral.hpp"

#include <random>

namespace ncx {

// D = [[0, P*], [P, 0]] with P : H+ -> H-
inline Matrix odd_operator(const Matrix& P) {
  int n = P.c, m = P.r;
  Matrix D(n + m, n + m);
  set_block(D, 0, n, P.adjoint());
  set_block(D, n, 0, P);
  return D;
}

inline std::vector<int> standard_grading(int plus, int minus) {
  std::vector<int> g(plus, 1);
  g.insert(g.end(), minus, -1);
  return g;
}

// C[Z2] on C^2 ⊕ C^2: pi+(u_s) = diag(1,-1), pi-(u_s) = 1, sigma(u_s) = -u_s
inline TwistedTriple triple_micro(std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  CrossedProduct cp = crossed_product(scenario_z2trivial());
  TwistedTriple t;
  t.name = "micro";
  t.alg = cp.alg;
  t.grading = standard_grading(2, 2);
  Matrix us = Matrix::identity(4);
  us(1, 1) = C(-1);
  t.rep = {Matrix::identity(4), us};
  t.D = odd_operator(random_unimodular(2, rng));
  t.sigma = LinearMap::diagonal({C(1), C(-1)});
  return t;
}

inline Scenario scenario_twisted3() {
  Scenario s = permutation_scenario("twisted3", {{0, 1, 2}, {1, 0, 2}}, {"id", "s"});
  s.k = ConformalCocycle::coboundary(s.G, s.X, {Q(1), Q(4), Q(9)});
  return s;
}

// C(3 points) ⋊ Z2 (swap of 0,1) with a conformal cocycle; pi+ = permutation representation,
// pi- = the same twisted by the sign character
inline TwistedTriple triple_twisted3(std::uint64_t seed = 23) {
  std::mt19937_64 rng(seed);
  Scenario s = scenario_twisted3();
  CrossedProduct cp = crossed_product(s);
  int n = s.X.npoints;
  TwistedTriple t;
  t.name = "twisted3";
  t.alg = cp.alg;
  t.grading = standard_grading(n, n);
  for (int i = 0; i < cp.alg.dim; ++i) {
    int x = cp.point(i), g = cp.group(i);
    Matrix pv(n, n);
    for (int y = 0; y < n; ++y)
      if (s.X(g, y) == x) pv(x, y) = C(1);
    C chi = g == s.G.id ? C(1) : C(-1);
    t.rep.push_back(block_diag(pv, chi * pv));
  }
  t.D = odd_operator(random_unimodular(n, rng));
  t.sigma = cp.sigma_from_cocycle(s.k);
  return t;
}

inline Scenario scenario_two_points() {
  Scenario s;
  s.name = "two_points";
  s.G = FiniteGroup::trivial();
  s.X = GAction::make(s.G, 2, {0, 1});
  s.k = ConformalCocycle::trivial(s.G, s.X);
  return s;
}

// C({0,1}) on C^3 ⊕ C^3 with pi(delta_1) of rank 2 on H+ and rank 1 on H-
inline TwistedTriple triple_asym(std::uint64_t seed = 5) {
  std::mt19937_64 rng(seed);
  CrossedProduct cp = crossed_product(scenario_two_points());
  TwistedTriple t;
  t.name = "asym";
  t.alg = cp.alg;
  t.grading = standard_grading(3, 3);
  Matrix p1(6, 6);
  for (int i : {0, 1, 3}) p1(i, i) = C(1);
  t.rep = {Matrix::identity(6) - p1, p1};
  t.D = odd_operator(random_unimodular(3, rng));
  t.sigma = LinearMap::identity(2);
  return t;
}

inline std::vector<TwistedTriple> default_triples() { return {triple_micro(), triple_twisted3(), triple_asym()}; }

}  // namespace ncx
