#include "catch_amalgamated.hpp"

#include "ncx/gnormal.hpp"
#include "ncx/scenarios.hpp"
#include "ncx/spectral.hpp"

using namespace ncx;

namespace {

Chain elem(const Element& e) { return tensor({e}); }

Chain power_T(Chain x, int k) {
  for (int i = 0; i < k; ++i) x = cyclic_T(x);
  return x;
}

Cochain random_cochain(const BasisAlgebra& A, int m, std::mt19937_64& rng) {
  std::map<Tuple, C> vals;
  for_each_tuple(A.dim, m, [&](const Tuple& t) { vals[t] = rand_c(rng); });
  return Cochain::from_map(m, vals);
}

// E_ij in matrix_units(2)
int E(int i, int j) { return (i - 1) * 2 + (j - 1); }

}  // namespace

TEST_CASE("hochschild boundary") {
  BasisAlgebra M2 = BasisAlgebra::matrix_units(2);
  SECTION("b(a0 ⊗ a1) = a0 a1 - a1 a0") {
    Chain x = Chain::basis({E(1, 2), E(2, 1)});
    Chain expect = Chain::basis({E(1, 1)}) - Chain::basis({E(2, 2)});
    CHECK(hochschild_b(M2, x) == expect);
  }
  SECTION("degree 0 is a domain error") { CHECK_THROWS_AS(hochschild_b(M2, Chain::basis({0})), std::domain_error); }
  SECTION("b^2 = 0 in degree 4") {
    std::mt19937_64 rng(2);
    for (int n = 0; n < 20; ++n) {
      Chain x = random_chain(M2, 4, 6, rng);
      REQUIRE(hochschild_b(M2, hochschild_b(M2, x)).is_zero());
    }
  }
  SECTION("cochain b is the transpose") {
    std::mt19937_64 rng(3);
    for (int m = 1; m <= 3; ++m) {
      Cochain phi = random_cochain(M2, m - 1, rng);
      Chain x = random_chain(M2, m, 5, rng);
      REQUIRE(evaluate(cochain_b(M2, phi), x) == evaluate(phi, hochschild_b(M2, x)));
    }
  }
}

TEST_CASE("cyclic operator, its powers and the norm") {
  BasisAlgebra M2 = BasisAlgebra::matrix_units(2);
  CHECK(cyclic_T(Chain::basis({E(1, 2), E(2, 2)})) == Chain::basis({E(2, 2), E(1, 2)}, C(-1)));
  std::mt19937_64 rng(4);
  for (int m = 0; m <= 5; ++m) {
    Chain x = random_chain(M2, m, 5, rng);
    CHECK(power_T(x, m + 1) == x);
    CHECK(cyclic_A(x - cyclic_T(x)).is_zero());
    CHECK(is_cyclic(cyclic_average(x)));
  }
}

TEST_CASE("Connes operator") {
  BasisAlgebra M2 = BasisAlgebra::matrix_units(2);
  Element one = unit_element(M2), a = Element::basis(E(1, 2));
  SECTION("B(a0) = 1 ⊗ a0 + a0 ⊗ 1") {
    // T on degree 1 carries the sign -1
    CHECK(connes_B(M2, elem(a)) == tensor({one, a}) + tensor({a, one}));
  }
  SECTION("mixed complex identities") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 20; ++n) {
      Chain x = random_chain(M2, 3, 5, rng);
      REQUIRE((hochschild_b(M2, connes_B(M2, x)) + connes_B(M2, hochschild_b(M2, x))).is_zero());
      REQUIRE(connes_B(M2, connes_B(M2, x)).is_zero());
    }
  }
  SECTION("cochain T and B are transposes") {
    std::mt19937_64 rng(6);
    for (int m = 0; m <= 2; ++m) {
      Chain x = random_chain(M2, m, 5, rng);
      Cochain phi = random_cochain(M2, m, rng), psi = random_cochain(M2, m + 1, rng);
      REQUIRE(evaluate(cochain_T(phi), x) == evaluate(phi, cyclic_T(x)));
      REQUIRE(evaluate(cochain_A(phi), x) == evaluate(phi, cyclic_A(x)));
      REQUIRE(evaluate(cochain_B(M2, psi), x) == evaluate(psi, connes_B(M2, x)));
    }
  }
}

TEST_CASE("periodicity operator") {
  CHECK(periodicity_coefficient(3) == Q(1, 6));
  BasisAlgebra M2 = BasisAlgebra::matrix_units(2);
  CHECK(periodicity_S(M2, Chain(4)).is_zero());
  CHECK_THROWS_AS(periodicity_S(M2, Chain::basis({0, 1})), std::domain_error);
  std::mt19937_64 rng(7);
  SECTION("cyclic b-cycles go to b-cycles") {
    BasisAlgebra U = BasisAlgebra::upper_triangular(2);
    for (const BasisAlgebra* A : {&M2, &U})
      for (int m = 3; m <= 5; ++m) {
        Chain eta = hochschild_b(*A, cyclic_A(random_chain(*A, m + 1, 4, rng)));
        REQUIRE(hochschild_b(*A, eta).is_zero());
        REQUIRE(hochschild_b(*A, periodicity_S(*A, eta)).is_zero());
      }
  }
  SECTION("cyclic cocycles go to cyclic cocycles") {
    for (int m = 0; m <= 2; ++m) {
      Cochain phi = memoize(cochain_b(M2, cochain_A(random_cochain(M2, m, rng))));
      Cochain s = memoize(cochain_S(M2, phi));
      Cochain bs = cochain_b(M2, s), ts = cochain_T(s);
      int n = 0;
      for_each_tuple(M2.dim, s.degree, [&](const Tuple& t) {
        if (n++ < 2000) REQUIRE(ts(t) == s(t));
      });
      n = 0;
      for_each_tuple(M2.dim, s.degree + 1, [&](const Tuple& t) {
        if (n++ < 2000) REQUIRE(bs(t).is_zero());
      });
    }
  }
  Chain x = random_chain(M2, 4, 4, rng);
  Cochain phi = random_cochain(M2, 2, rng);
  CHECK(evaluate(cochain_S(M2, phi), x) == evaluate(phi, periodicity_S(M2, x)));
}

TEST_CASE("normalized chains") {
  Scenario s = scenario_z3rot();
  CrossedProduct cp = crossed_product(s);
  const auto& A = cp.alg;
  std::mt19937_64 rng(8);
  for (int n = 0; n < 20; ++n) {
    Chain x = random_chain(A, 2, 3, rng);
    Tuple t = x.terms.begin()->first;
    for (int l = 1; l <= 3; ++l) REQUIRE(normalize(A, insert_unit(A, t, l)).is_zero());
    REQUIRE(normalize(A, normalize(A, x)) == normalize(A, x));
  }
  // slot 0 may hold the unit
  CHECK_FALSE(normalize(A, insert_unit(A, {1, 2}, 0)).is_zero());
}

TEST_CASE("inhomogeneization") {
  Scenario s = scenario_z3rot();
  CrossedProduct cp = crossed_product(s);
  int r = 1, id = s.G.id;
  SECTION("fixed point") {
    Chain x = Chain::basis({cp.index(0, id), cp.index(1, r)});
    CHECK(theta(cp, x) == x);
  }
  SECTION("two slots") {
    // theta(f0 u_phi ⊗ f1 u_psi) = f0 ⊗ (f1 ∘ phi^-1) u_{phi psi}; delta_y ∘ phi^-1 = delta_{phi y}
    Chain x = Chain::basis({cp.index(0, r), cp.index(1, r)});
    CHECK(theta(cp, x) == Chain::basis({cp.index(0, id), cp.index(s.X(r, 1), s.G(r, r))}));
  }
  SECTION("idempotent") {
    std::mt19937_64 rng(9);
    for (int n = 0; n < 50; ++n) {
      Chain x = random_chain(cp.alg, n % 5, 4, rng);
      Chain t = theta(cp, x);
      REQUIRE(theta(cp, t) == t);
      for (auto& [tup, v] : t.terms)
        for (size_t j = 0; j + 1 < tup.size(); ++j) REQUIRE(cp.group(tup[j]) == id);
    }
  }
}

TEST_CASE("antisymmetrization") {
  BasisAlgebra F = BasisAlgebra::functions(3);
  Element f0 = Element::basis(0) + Element::basis(1, C(2)), f1 = Element::basis(1), f2 = Element::basis(2, C::i());
  CHECK(antisymmetrize({f0, f1}) == tensor({f0, f1}));
  CHECK(antisymmetrize({f0, f1, f2}) == tensor({f0, f1, f2}) - tensor({f0, f2, f1}));
  Element f3 = Element::basis(0, C(3));
  Chain a = antisymmetrize({f0, f1, f2, f3}), b = antisymmetrize({f0, f1, f3, f2});
  CHECK((a + b).is_zero());
  std::vector<Element> big(8, f1);
  CHECK_THROWS_AS(antisymmetrize(big), std::domain_error);
}

TEST_CASE("Chern character") {
  Scenario s = scenario_z2swap();
  CrossedProduct cp = crossed_product(s);
  const auto& A = cp.alg;
  Element one = unit_element(A);
  SECTION("Ch_0 and the Ch_2 coefficient") {
    Element p = cp.delta(0, s.G.id);
    PeriodicChain ch = chern_character(A, scalar_amatrix(p), 1);
    CHECK(ch.comp[0] == elem(p));
    Chain expect = tensor({p - one * C(Q(1, 2)), p, p});
    expect *= C(-2);
    CHECK(ch.comp[1] == expect);
  }
  SECTION("e = 1") {
    PeriodicChain ch = chern_character(A, scalar_amatrix(one), 3);
    CHECK(ch.comp[0] == elem(one));
    for (int q = 1; q <= 3; ++q) CHECK(normalize(A, ch.comp[q]).is_zero());
  }
  SECTION("non-idempotent input") {
    CHECK_THROWS_AS(chern_character(A, scalar_amatrix(cp.delta(0, 1)), 1), validation_error);
  }
  SECTION("(b + B) Ch(e) = 0 for conjugated projections") {
    std::mt19937_64 rng(10);
    for (int n = 0; n < 10; ++n) {
      AMatrix e = conjugated_projection(A, random_element(A, rng, 2), random_element(A, rng, 2));
      PeriodicChain ch = chern_character(A, e, 3);
      for (int q = 0; q < 3; ++q)
        REQUIRE(normalize(A, hochschild_b(A, ch.comp[q + 1]) + connes_B(A, ch.comp[q])).is_zero());
      Element tr = e.at(0, 0) + e.at(1, 1);
      REQUIRE(ch.comp[0] == elem(tr));
    }
  }
}

TEST_CASE("periodic pairing") {
  BasisAlgebra M2 = BasisAlgebra::matrix_units(2);
  std::mt19937_64 rng(11);
  PeriodicCochain phi{0, {random_cochain(M2, 0, rng), random_cochain(M2, 2, rng)}};
  CHECK(pairing(phi, PeriodicChain{0, {Chain(0), Chain(2)}}) == C(0));
  CHECK_THROWS_AS(pairing(phi, PeriodicChain{1, {Chain(1)}}), std::domain_error);
  // <(b + B) psi, eta> = 0 for a (b + B)-cycle eta; psi has a single degree-1 component
  PeriodicChain zeta{1, {random_chain(M2, 1, 4, rng), random_chain(M2, 3, 4, rng)}};
  PeriodicChain eta = periodic_boundary(M2, zeta);
  REQUIRE((hochschild_b(M2, eta.comp[1]) + connes_B(M2, eta.comp[0])).is_zero());
  Cochain psi = random_cochain(M2, 1, rng);
  PeriodicCochain dpsi{0, {cochain_B(M2, psi), cochain_b(M2, psi)}};
  CHECK(pairing(dpsi, eta) == C(0));
}

// the verbatim chain-level S does not commute with b on cyclic chains; kept as a recorded failure
TEST_CASE("Sb = bS on cyclic degree-4 chains", "[!shouldfail]") {
  BasisAlgebra M2 = BasisAlgebra::matrix_units(2);
  std::mt19937_64 rng(12);
  for (int n = 0; n < 10; ++n) {
    Chain x = cyclic_average(random_chain(M2, 4, 4, rng));
    REQUIRE(is_cyclic(x));
    REQUIRE(periodicity_S(M2, hochschild_b(M2, x)) == hochschild_b(M2, periodicity_S(M2, x)));
  }
}
