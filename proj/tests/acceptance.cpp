// one PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails
#include "ncx/io.hpp"
#include "ncx/scenarios.hpp"
#include "ncx/suites.hpp"
#include "ncx/triples.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

using namespace ncx;

namespace {

constexpr double kRuntime1 = 60, kRuntime3 = 300, kRuntime9 = 30;  // seconds
constexpr double kTol9 = 1e-6;
constexpr double kTol10 = 1e-10;
constexpr double kTol11Route = 1e-4, kTol11Doubling = 1e-6;
constexpr std::uint64_t kSeed = 7;

std::string dir = "data";

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int prec = 2) {
  char b[64];
  std::snprintf(b, sizeof b, "%.*f", prec, v);
  return b;
}

std::string sci(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

void require_suite(Verdict& v, const SuiteResult& r, const std::function<bool(const std::string&)>& keep = nullptr) {
  for (auto& c : r.checks) {
    if (keep && !keep(c.name)) continue;
    v.require(c.pass, r.input + ": " + c.name + " (" + c.residual + ")");
  }
}

bool starts(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

std::vector<Scenario> scenarios() {
  std::vector<Scenario> out;
  for (auto& s : default_suite()) out.push_back(load_scenario(dir + "/" + s.name + ".json"));
  return out;
}

std::vector<TripleInput> triples() {
  std::vector<TripleInput> out;
  for (auto n : {"micro", "twisted3", "asym"}) out.push_back(load_triple(dir + "/" + n + ".json"));
  return out;
}

SuiteOptions options() {
  SuiteOptions o;
  o.seed = kSeed;
  return o;
}

Verdict c1() {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  SuiteOptions o = options();
  o.max_degree = 6;
  o.samples = 700;  // 100 per degree 0..6
  int n = 0;
  for (auto& s : scenarios()) {
    require_suite(v, verify_cyclic(s, o));
    ++n;
  }
  double t = seconds_since(t0);
  v.require(n == 5, "expected 5 scenarios");
  v.require(t < kRuntime1, "runtime " + fixed(t) + " s");
  v.detail = (v.pass ? "" : v.detail + "; ") + std::to_string(n) + " scenarios x 700 chains, " + fixed(t) + " s";
  return v;
}

Verdict c2() {
  Verdict v;
  SuiteOptions o = options();
  o.q_max = 3;
  o.idempotents = 10;
  Scenario s = load_scenario(dir + "/z2swap.json");
  require_suite(v, verify_chern(s, o));
  if (v.pass) v.detail = "10 idempotents over C(X) x| Z2, q_max 3";
  return v;
}

Verdict c3() {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  SuiteOptions o = options();
  o.hp_q_max = 1;
  std::string totals;
  for (auto& s : scenarios()) {
    require_suite(v, verify_homology(s, o));
    EngineConfig cfg;
    int total = compute_hp(s, Flavor::twisted, 0, 1, cfg).total_computed;
    totals += (totals.empty() ? "" : " ") + s.name + "=" + std::to_string(total);
    if (s.name == "z2swap") v.require(total == 1, "z2swap total " + std::to_string(total));
    if (s.name == "z2trivial") v.require(total == 2, "z2trivial total " + std::to_string(total));
    if (s.name == "s3") v.require(total == 2, "s3 total " + std::to_string(total));
  }
  double t = seconds_since(t0);
  v.require(t < kRuntime3, "runtime " + fixed(t) + " s");
  v.detail = (v.pass ? "" : v.detail + "; ") + "HP0 " + totals + ", " + fixed(t) + " s";
  return v;
}

Verdict c4() {
  Verdict v;
  for (auto& s : scenarios()) require_suite(v, verify_twisted(s, options()));
  if (v.pass) v.detail = "all conjugacy classes of 5 scenarios";
  return v;
}

// spectral suite once per triple at q_max 3, shared by criteria 5-8
std::vector<SuiteResult>& spectral_results() {
  static std::vector<SuiteResult> res;
  if (res.empty()) {
    SuiteOptions o = options();
    o.q_max = 3;
    for (auto& t : triples()) res.push_back(verify_spectral(t, o));
  }
  return res;
}

Verdict c5() {
  Verdict v;
  v.require(tau_coefficient(0) == Q(1, 2) && tau_coefficient(1) == Q(-1, 4) && tau_coefficient(2) == Q(1, 24),
            "coefficients");
  for (auto& r : spectral_results())
    require_suite(v, r, [](const std::string& n) {
      return n == "triple valid" || starts(n, "b tau_") || starts(n, "T tau_") || n.find("normalized") != std::string::npos;
    });
  if (v.pass) v.detail = "3 triples, q <= 3, c0 = 1/2, c1 = -1/4, c2 = 1/24";
  return v;
}

Verdict c6() {
  Verdict v;
  int n = 0;
  for (auto& r : spectral_results())
    for (auto& c : r.checks)
      if (starts(c.name, "transgression") || c.name.find("(phi - psi)") != std::string::npos) {
        v.require(c.pass, r.input + ": " + c.name + " (" + c.residual + ")");
        ++n;
      }
  v.require(n > 0, "no transgression checks ran");
  v.require(transgression_kappa == Q(1), "frozen constant");
  if (v.pass) v.detail = std::to_string(n) + " checks, q in {0,1}, kappa = 1";
  return v;
}

Verdict c7() {
  Verdict v;
  int n = 0;
  for (auto& r : spectral_results())
    for (auto& c : r.checks)
      if (starts(c.name, "conformal transport") || starts(c.name, "unitary invariance")) {
        v.require(c.pass, r.input + ": " + c.name + " (" + c.residual + ")");
        ++n;
      }
  v.require(n > 0, "no transport checks ran");
  if (v.pass) v.detail = std::to_string(n) + " checks";
  return v;
}

Verdict c8() {
  Verdict v;
  TripleInput in = load_triple(dir + "/asym.json");
  const auto& t = in.triple;
  AMatrix one = scalar_amatrix(unit_element(t.alg)), d1 = scalar_amatrix(Element::basis(1));
  IndexValue i1 = index(t, d1), i0 = index(t, one);
  v.require(i1.value == Q(1), "asym index " + q_plain(i1.value));
  v.require(i0.value == Q(0), "e = 1 index " + q_plain(i0.value));
  for (int q = 0; q <= 3; ++q) {
    C p1 = tau_bar_pairing(t, d1, q), p0 = tau_bar_pairing(t, one, q);
    v.require(p1 == C(1), "pairing q=" + std::to_string(q) + " " + c_str(p1));
    v.require(p0 == C(0), "unit pairing q=" + std::to_string(q) + " " + c_str(p0));
    v.require(tau_bar_pairing(t, d1, q + 1) == p1, "q-stability at " + std::to_string(q));
  }
  for (auto& r : spectral_results()) require_suite(v, r, [](const std::string& n) { return starts(n, "index"); });
  if (v.pass) v.detail = "asym: index 1 = pairing for q = 0..4; e = 1: 0";
  return v;
}

Verdict c9() {
  Verdict v;
  GeometryInput g = load_geometry(dir + "/t2.json");
  QuadratureOptions opt;
  opt.N = 256;
  std::vector<CocycleArg> args;
  int id = g.gs.find("id");
  for (auto f : {"sin(x)*sin(y)", "cos(x)", "cos(y)"}) args.push_back({parse_function(f, g.gs.chart.coords), id});
  auto t0 = std::chrono::steady_clock::now();
  cplx val = cm_cocycle_eval(g.gs, 1, args, opt);
  double t = seconds_since(t0);
  double err = std::abs(val - cplx(0, -M_PI / 4));
  v.require(err < kTol9, "error " + sci(err));
  v.require(t < kRuntime9, "runtime " + fixed(t) + " s");
  v.detail = (v.pass ? "" : v.detail + "; ") + "value " + fmt_real(val.real()) + (val.imag() < 0 ? "" : "+") +
             fmt_real(val.imag()) + "i, error " + sci(err) + ", " + fixed(t, 3) + " s";
  return v;
}

Verdict c10() {
  Verdict v;
  GeometryInput g = load_geometry(dir + "/s2.json");
  QuadratureOptions opt;
  opt.N = g.N;
  FormExpr one = parse_form("1", g.gs.chart.coords);
  double worst = 0;
  // pi/3, pi/2, 2pi/3, pi as multiples of pi/6
  for (int k : {2, 3, 4, 6}) {
    int e = g.gs.find("r" + std::to_string(k));
    v.require(g.gs.group[e].fixed.size() == 2, "r" + std::to_string(k) + " fixed points");
    double s = std::abs(conformal_invariant_total(g.gs, e, one, opt));
    worst = std::max(worst, s);
    v.require(s < kTol10, "r" + std::to_string(k) + " pole sum " + sci(s));
  }
  v.detail = (v.pass ? "" : v.detail + "; ") + "max |pole sum| " + sci(worst);
  return v;
}

Verdict c11() {
  Verdict v;
  GeometryInput g = load_geometry(dir + "/t2.json");
  FormExpr w = parse_form("dx^dy", g.gs.chart.coords);
  int id = g.gs.find("id");
  QuadratureOptions a, b;
  a.N = 64;
  b.N = 128;
  cplx d = conformal_invariant_direct(g.gs, id, 2, w, a), p = conformal_invariant_pairing(g.gs, w, a);
  cplx d2 = conformal_invariant_direct(g.gs, id, 2, w, b), p2 = conformal_invariant_pairing(g.gs, w, b);
  cplx expect(0, -2 * M_PI);
  double ed = std::abs(d - expect), ep = std::abs(p - expect);
  double rd = std::abs(d2 - d) / std::abs(d), rp = std::abs(p2 - p) / std::abs(p);
  v.require(ed < kTol11Route, "direct error " + sci(ed));
  v.require(ep < kTol11Route, "pairing error " + sci(ep));
  v.require(rd < kTol11Doubling, "direct doubling " + sci(rd));
  v.require(rp < kTol11Doubling, "pairing doubling " + sci(rp));
  v.detail = (v.pass ? "" : v.detail + "; ") + "errors " + sci(ed) + " / " + sci(ep) + ", doubling " + sci(std::max(rd, rp));
  return v;
}

Verdict c12() {
  Verdict v;
  Scenario z3 = load_scenario(dir + "/z3rot.json"), s3 = load_scenario(dir + "/s3.json"), v4 = load_scenario(dir + "/v4.json");
  GeometryInput t2 = load_geometry(dir + "/t2.json"), s2 = load_geometry(dir + "/s2.json");
  auto reports = [&](int threads) {
    SuiteOptions o = options();
    o.threads = threads;
    o.seed = 11;
    std::vector<std::string> out;
    out.push_back(dump_report(verify_cyclic(z3, o).to_json()));
    out.push_back(dump_report(verify_twisted(s3, o).to_json()));
    json h = json::array();
    for (auto& r : homology_routes(v4, 1, threads).reports) h.push_back(homology_to_json(r));
    out.push_back(dump_report(h));
    QuadratureOptions q;
    q.N = 48;
    q.threads = threads;
    out.push_back(dump_report(invariant_report(s2, q)));
    o.N = 64;
    out.push_back(dump_report(verify_geometry(t2, o).to_json()));
    return out;
  };
  auto r1 = reports(1);
  for (int th : {2, 8}) {
    auto r = reports(th);
    for (size_t k = 0; k < r1.size(); ++k) v.require(r[k] == r1[k], "report " + std::to_string(k) + " differs at " + std::to_string(th) + " threads");
  }
  if (v.pass) v.detail = std::to_string(r1.size()) + " reports identical across 1, 2, 8 threads";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) dir = argv[1];
  struct Item {
    const char* name;
    Verdict (*fn)();
  };
  const Item items[] = {{"operator identities", c1},
                        {"Chern cycle", c2},
                        {"orbit-count prediction for HP", c3},
                        {"chi/mu inverse pair and intertwining", c4},
                        {"tau cocycle", c5},
                        {"transgression", c6},
                        {"conformal transport and unitary invariance", c7},
                        {"index pairing", c8},
                        {"transverse fundamental class on T2", c9},
                        {"S2 rotation cancellation", c10},
                        {"conformal invariant two routes", c11},
                        {"determinism across threads", c12}};
  int failed = 0, k = 0;
  for (auto& it : items) {
    ++k;
    Verdict v;
    try {
      v = it.fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("criterion %2d: %s  %s  [%s]\n", k, v.pass ? "PASS" : "FAIL", it.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass\n", k - failed, k);
  return failed ? 1 : 0;
}
