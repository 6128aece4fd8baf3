#include "catch_amalgamated.hpp"

#include "ncx/io.hpp"
#include "ncx/suites.hpp"

#include <chrono>

using namespace ncx;

namespace {

GeometryInput load(const std::string& name) { return load_geometry(std::string(NCX_DATA) + "/" + name); }

QuadratureOptions quad(int N) {
  QuadratureOptions o;
  o.N = N;
  return o;
}

std::vector<CocycleArg> args(const GeometryScenario& gs, const std::vector<std::string>& f,
                             const std::vector<std::string>& g) {
  std::vector<CocycleArg> a;
  for (size_t j = 0; j < f.size(); ++j) a.push_back({parse_function(f[j], gs.chart.coords), gs.find(g[j])});
  return a;
}

}  // namespace

TEST_CASE("transverse fundamental class on the torus") {
  GeometryInput in = load("t2.json");
  const auto& gs = in.gs;
  auto t0 = std::chrono::steady_clock::now();
  cplx v = cm_cocycle_eval(gs, 1, args(gs, {"sin(x)*sin(y)", "cos(x)", "cos(y)"}, {"id", "id", "id"}), quad(256));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(std::abs(v - cplx(0, -M_PI / 4)) < 1e-6);
  CHECK(secs < 30);
  SECTION("constant entries give zero") {
    CHECK(std::abs(cm_cocycle_eval(gs, 1, args(gs, {"sin(x)*sin(y)", "1", "cos(y)"}, {"id", "id", "id"}), quad(64))) < 1e-12);
    CHECK(std::abs(cm_cocycle_eval(gs, 0, args(gs, {"1"}, {"id"}), quad(64))) < 1e-12);
  }
  SECTION("a word composing to a translation has no fixed points") {
    CHECK(std::abs(cm_cocycle_eval(gs, 1, args(gs, {"sin(x)*sin(y)", "cos(x)", "cos(y)"}, {"tx", "id", "id"}), quad(64))) ==
          0);
  }
  SECTION("degree above the dimension") {
    CHECK(cm_cocycle_eval(gs, 2, args(gs, {"1", "cos(x)", "cos(y)", "sin(x)", "sin(y)"}, {"id", "id", "id", "id", "id"}),
                          quad(16)) == cplx(0));
  }
  SECTION("argument checks") {
    CHECK_THROWS_AS(cm_cocycle_eval(gs, 1, args(gs, {"1", "1"}, {"id", "id"}), quad(16)), std::invalid_argument);
    CHECK_THROWS_AS(gs.find("nope"), geometry_error);
  }
}

TEST_CASE("cocycle symmetries") {
  GeometryInput in = load("t2.json");
  const auto& gs = in.gs;
  auto ev = [&](const std::vector<std::string>& f) {
    return cm_cocycle_eval(gs, 1, args(gs, f, {"id", "id", "id"}), quad(64));
  };
  // cyclic: phi(f2, f0, f1) = phi(f0, f1, f2) in degree 2
  cplx a = ev({"sin(x)*sin(y)", "cos(x)", "cos(y)"}), b = ev({"cos(y)", "sin(x)*sin(y)", "cos(x)"});
  CHECK(std::abs(a - b) < 1e-10);
  CHECK(std::abs(a) > 1e-3);
  // antisymmetric in the differentiated slots
  CHECK(std::abs(ev({"sin(x)*sin(y)", "cos(y)", "cos(x)"}) + a) < 1e-10);
  // linear in f0
  cplx c = ev({"cos(x)*cos(y)", "cos(x)", "cos(y)"}), s = ev({"sin(x)*sin(y) + cos(x)*cos(y)", "cos(x)", "cos(y)"});
  CHECK(std::abs(s - a - c) < 1e-10);
}

TEST_CASE("non-member group word") {
  FactorMotion id, quarter;
  quarter.shift[0] = M_PI / 2;
  GeometryScenario gs = make_product_geometry("t2q", "T2", {"T2"}, {}, {"id", "q"}, {{id}, {quarter}});
  CHECK_THROWS_AS(cm_cocycle_eval(gs, 1, args(gs, {"1", "cos(x)", "cos(y)"}, {"q", "q", "id"}), quad(8)), geometry_error);
}

TEST_CASE("rotation fixed points on the sphere cancel") {
  GeometryInput in = load("s2.json");
  const auto& gs = in.gs;
  FormExpr one = parse_form("1", gs.chart.coords);
  for (int k : {2, 3, 4, 6}) {
    CAPTURE(k);
    int g = gs.find("r" + std::to_string(k));
    REQUIRE(gs.group[g].fixed.size() == 2);
    cplx north = 0, south = 0;
    for (auto& fc : gs.group[g].fixed) {
      GeometryScenario single = gs;
      single.group[g].fixed = {fc};
      (fc.label == "N" ? north : south) = conformal_invariant_direct(single, g, 0, one, quad(64));
    }
    CHECK(std::abs(north) > 0.1);
    CHECK(std::abs(north + south) < 1e-10);
    CHECK(std::abs(conformal_invariant_total(gs, g, one, quad(64))) < 1e-10);
  }
}

TEST_CASE("conformal invariant two routes on the torus") {
  GeometryInput in = load("t2.json");
  const auto& gs = in.gs;
  int id = gs.find("id");
  FormExpr vol = parse_form("dx^dy", gs.chart.coords);
  cplx d = conformal_invariant_direct(gs, id, 2, vol, quad(64));
  cplx p = conformal_invariant_pairing(gs, vol, quad(64));
  CHECK(std::abs(d - cplx(0, -2 * M_PI)) < 1e-4);
  CHECK(std::abs(p - cplx(0, -2 * M_PI)) < 1e-4);
  cplx d2 = conformal_invariant_direct(gs, id, 2, vol, quad(128)), p2 = conformal_invariant_pairing(gs, vol, quad(128));
  CHECK(std::abs(d2 - d) / std::abs(d) < 1e-6);
  CHECK(std::abs(p2 - p) / std::abs(p) < 1e-6);
  // degree-0 forms have no top part
  CHECK(std::abs(conformal_invariant_direct(gs, id, 2, parse_form("1", gs.chart.coords), quad(32))) < 1e-12);
  // exact forms integrate to zero
  FormExpr ex = exterior_d(parse_form("sin(x)*dy", gs.chart.coords));
  CHECK(std::abs(conformal_invariant_direct(gs, id, 2, ex, quad(64))) < 1e-10);
}

TEST_CASE("product geometries") {
  GeometryInput a = load("t2xt2.json");
  cplx v = conformal_invariant_total(a.gs, a.gs.find(a.phi), a.omega, quad(a.N));
  CHECK(std::abs(v - cplx(-4 * M_PI * M_PI)) < 1e-6);
  GeometryInput b = load("s2xt2.json");
  cplx w = conformal_invariant_total(b.gs, b.gs.find(b.phi), b.omega, quad(b.N));
  CHECK(std::abs(w - cplx(-4 * M_PI)) < 1e-6);
}

TEST_CASE("geometric chains") {
  std::vector<std::string> xy = {"x", "y"};
  FormExpr w = parse_form("(sin(x) + cos(y))*dx^dy", xy);
  GeometricChain m = monomial_decomposition(w, 2);
  CHECK(m.size() == 4);
  GeometricChain eps = epsilon_map(m);
  CHECK(eps.size() == 8);
  FormExpr back = alpha_map(eta_omega(w, 2), 2);
  FormExpr lit = alpha_map(eps, 2);
  for (double t : {0.2, 1.4, 3.0}) {
    double p[2] = {t, 2 * t};
    // the unnormalized antisymmetrization is a right inverse of alpha
    REQUIRE(std::abs(back.at(p).c[3] - w.at(p).c[3]) < 1e-12);
    REQUIRE(std::abs(2.0 * lit.at(p).c[3] - w.at(p).c[3]) < 1e-12);
  }
  // one-forms
  FormExpr u = parse_form("cos(y)*dx", xy);
  FormExpr ub = alpha_map(eta_omega(u, 1), 2);
  double p[2] = {0.3, 0.8};
  CHECK(std::abs(ub.at(p).c[1] - u.at(p).c[1]) < 1e-12);
}

TEST_CASE("geometry suite on the shipped torus") {
  GeometryInput in = load("t2.json");
  SuiteOptions o;
  o.N = 64;
  SuiteResult r = verify_geometry(in, o);
  for (auto& c : r.checks) {
    CAPTURE(c.name, c.residual, c.detail);
    CHECK(c.pass);
  }
}
