#include "catch_amalgamated.hpp"

#include "ncx/gnormal.hpp"
#include "ncx/scenarios.hpp"

using namespace ncx;

namespace {

Chain random_points(int npoints, int m, int nterms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pt(0, npoints - 1);
  Chain r(m);
  for (int k = 0; k < nterms; ++k) {
    Tuple t(m + 1);
    for (auto& x : t) x = pt(rng);
    r.add(t, rand_c(rng));
  }
  return r;
}

Cochain random_cochain(const BasisAlgebra& A, int m, std::mt19937_64& rng) {
  std::map<Tuple, C> vals;
  for_each_tuple(A.dim, m, [&](const Tuple& t) { vals[t] = rand_c(rng); });
  return Cochain::from_map(m, vals);
}

std::vector<Scenario> small_suite() { return {scenario_z2swap(), scenario_z2trivial(), scenario_z3rot(), scenario_s3()}; }

}  // namespace

TEST_CASE("g_normalize kills the defining relations") {
  for (auto& s : small_suite()) {
    CAPTURE(s.name);
    CrossedProduct cp = crossed_product(s);
    std::mt19937_64 rng(21);
    CHECK(g_normalize(cp, Chain(2)).is_zero());
    for (int n = 0; n < 30; ++n) {
      int m = n % 4;
      Chain x = random_chain(cp.alg, m, 4, rng);
      REQUIRE(g_normalize(cp, x - theta(cp, x)).is_zero());
      for (int psi = 0; psi < s.G.order; ++psi) {
        REQUIRE(g_normalize(cp, psi_star(cp, psi, x) - x).is_zero());
        for (int j = 0; j <= m; ++j) REQUIRE(g_normalize(cp, psi_star_mj(cp, psi, j, x) - x).is_zero());
      }
    }
  }
}

TEST_CASE("g_normalize agrees with the row-reduced relation space") {
  for (auto& s : small_suite()) {
    CAPTURE(s.name);
    CrossedProduct cp = crossed_product(s);
    int maxm = cp.alg.dim > 10 ? 1 : 2;
    for (int m = 0; m <= maxm; ++m) {
      CAPTURE(m);
      QuotientBasis ng = build_NG(cp, m);
      long total = tuple_count(cp.alg.dim, m);
      CHECK(total - (long)ng.rank() == count_g_normalized_basis(cp, m));
      for (auto& [key, row] : ng.rows) REQUIRE(g_normalize(cp, row).is_zero());
      // x - g_normalize(x) lies in the relation space
      std::mt19937_64 rng(22 + m);
      for (int n = 0; n < 20; ++n) {
        Chain x = random_chain(cp.alg, m, 3, rng);
        REQUIRE(ng.reduce(x - g_normalize(cp, x)).is_zero());
      }
    }
  }
}

TEST_CASE("quotient basis bookkeeping") {
  QuotientBasis qb;
  Chain a = Chain::basis({0, 1}) - Chain::basis({1, 0});
  CHECK(qb.insert(a));
  CHECK_FALSE(qb.insert(C(3) * a));
  CHECK(qb.rank() == 1);
  CHECK(qb.reduce(Chain::basis({0, 1})) == Chain::basis({1, 0}));
}

TEST_CASE("twisted boundary on functions") {
  Scenario s = scenario_z3rot();
  const auto& G = s.G;
  const auto& X = s.X;
  SECTION("two-slot oracle") {
    for (int phi = 0; phi < G.order; ++phi)
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
          Chain expect(0);
          if (x == y) expect.add(Tuple{x}, C(1));
          if (X(G.inv(phi), y) == x) expect.add(Tuple{x}, C(-1));
          REQUIRE(twisted_b(G, X, phi, Chain::basis({x, y})) == expect);
        }
  }
  SECTION("phi = id is the Hochschild boundary of C(X)") {
    BasisAlgebra F = BasisAlgebra::functions(3);
    std::mt19937_64 rng(23);
    for (int n = 0; n < 30; ++n) {
      Chain x = random_chain(F, 1 + n % 4, 5, rng);
      REQUIRE(twisted_b(G, X, G.id, x) == hochschild_b(F, x));
      REQUIRE(twisted_B(G, X, G.id, x) == connes_B(F, x));
    }
  }
  SECTION("errors") {
    CHECK_THROWS_AS(twisted_b(G, X, 7, Chain::basis({0, 1})), std::out_of_range);
    CHECK_THROWS_AS(twisted_b(G, X, 1, Chain::basis({0})), std::domain_error);
  }
}

TEST_CASE("chi and mu on every conjugacy class") {
  for (auto& s : small_suite()) {
    CAPTURE(s.name);
    CrossedProduct cp = crossed_product(s);
    auto cd = conjugacy_analysis(s.G, s.X);
    const auto& G = s.G;
    const auto& X = s.X;
    std::mt19937_64 rng(24);
    for (size_t c = 0; c < cd.classes.size(); ++c) {
      int phi = cd.representative((int)c);
      CAPTURE(phi);
      for (int n = 0; n < 12; ++n) {
        int m = n % 4;
        Chain xi = lambda_phi(X, cd, phi, random_points(X.npoints, m, 3, rng));
        Chain cx = chi_phi(cp, phi, xi);
        REQUIRE(mu_phi(cp, cd, phi, cx) == xi);
        // chi is G_phi-equivariant, so it ignores the averaging
        for (int psi : cd.stabilizer[phi]) REQUIRE(chi_phi(cp, phi, point_action(X, psi, xi)) == cx);
        if (m >= 1) {
          REQUIRE(g_normalize(cp, hochschild_b(cp.alg, cx)) == chi_phi(cp, phi, twisted_b(G, X, phi, xi)));
          if (m >= 2) REQUIRE(twisted_b(G, X, phi, twisted_b(G, X, phi, xi)).is_zero());
        }
        REQUIRE(g_normalize(cp, connes_B(cp.alg, cx)) == chi_phi(cp, phi, twisted_B(G, X, phi, xi)));
        Chain z = block_part(cp, cd, g_normalize(cp, random_chain(cp.alg, m, 4, rng)), (int)c);
        REQUIRE(chi_phi(cp, phi, mu_phi(cp, cd, phi, z)) == z);
      }
      // chi of the unit-slot chain
      Chain pt = Chain::basis({0});
      if (phi == G.id) CHECK(chi_phi(cp, phi, pt) == g_normalize(cp, Chain::basis({cp.index(0, G.id)})));
    }
  }
}

TEST_CASE("mu rejects chains outside the block") {
  Scenario s = scenario_z2swap();
  CrossedProduct cp = crossed_product(s);
  auto cd = conjugacy_analysis(s.G, s.X);
  CHECK_THROWS_AS(mu_phi(cp, cd, 0, Chain::basis({cp.index(0, 1)})), std::domain_error);
}

TEST_CASE("b and B respect blocks and G-normalized cochains") {
  for (auto& s : small_suite()) {
    CAPTURE(s.name);
    CrossedProduct cp = crossed_product(s);
    auto cd = conjugacy_analysis(s.G, s.X);
    std::mt19937_64 rng(25);
    for (int n = 0; n < 20; ++n) {
      int m = 1 + n % 3;
      Chain x = random_chain(cp.alg, m, 5, rng);
      for (size_t c = 0; c < cd.classes.size(); ++c) {
        Chain xc = block_part(cp, cd, x, (int)c);
        REQUIRE(block_part(cp, cd, hochschild_b(cp.alg, xc), (int)c) == hochschild_b(cp.alg, xc));
        REQUIRE(block_part(cp, cd, connes_B(cp.alg, xc), (int)c) == connes_B(cp.alg, xc));
      }
    }
    if (cp.alg.dim > 6) continue;
    for (int m = 0; m <= 2; ++m) {
      Cochain phi = memoize(g_project(cp, random_cochain(cp.alg, m, rng)));
      REQUIRE(is_g_normalized(cp, phi));
      REQUIRE(is_g_normalized(cp, memoize(cochain_b(cp.alg, phi))));
      if (m >= 1) REQUIRE(is_g_normalized(cp, memoize(cochain_B(cp.alg, phi))));
    }
    CHECK_FALSE(is_g_normalized(cp, random_cochain(cp.alg, 1, rng)));
  }
}
