// ncx: batch front end for the workbench
#include "ncx/suites.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace ncx;

namespace {

struct RunConfig {
  std::vector<std::string> scenarios, triples, geometries;
  std::string suite = "all", flavor = "all", out;
  int q_max = -1;
  std::uint64_t seed = 7;
  int threads = 1;
  double tol = 0;
  int N = 0;
};

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const RunConfig& cfg, const json& report) {
  std::string text = dump_report(report);
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw usage_error("cannot write " + cfg.out);
  f << text;
}

void require(const std::vector<std::string>& v, const std::string& what) {
  if (v.empty()) throw usage_error("no " + what + " given");
}

SuiteOptions suite_options(const RunConfig& cfg) {
  SuiteOptions o;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  o.tol = cfg.tol;
  o.N = cfg.N;
  if (cfg.q_max >= 0) {
    o.q_max = cfg.q_max;
    o.hp_q_max = cfg.q_max;
  }
  return o;
}

int cmd_verify(const RunConfig& cfg) {
  static const std::vector<std::string> scenario_suites = {"cyclic", "chern", "twisted", "homology"};
  bool all = cfg.suite == "all";
  bool wants_scenarios = all || std::count(scenario_suites.begin(), scenario_suites.end(), cfg.suite);
  if (all) {
    if (cfg.scenarios.empty() && cfg.triples.empty() && cfg.geometries.empty()) throw usage_error("no inputs given");
  } else if (wants_scenarios) {
    require(cfg.scenarios, "scenarios");
  } else if (cfg.suite == "spectral") {
    require(cfg.triples, "triples");
  } else if (cfg.suite == "geometry") {
    require(cfg.geometries, "geometries");
  } else {
    throw usage_error("unknown suite '" + cfg.suite + "'");
  }
  SuiteOptions o = suite_options(cfg);
  std::vector<SuiteResult> runs;
  if (wants_scenarios)
    for (auto& p : cfg.scenarios) {
      Scenario s = load_scenario(p);
      if (all || cfg.suite == "cyclic") runs.push_back(verify_cyclic(s, o));
      if (all || cfg.suite == "twisted") runs.push_back(verify_twisted(s, o));
      if (all || cfg.suite == "homology") runs.push_back(verify_homology(s, o));
      if (cfg.suite == "chern") runs.push_back(verify_chern(s, o));
    }
  if (all || cfg.suite == "spectral")
    for (auto& p : cfg.triples) runs.push_back(verify_spectral(load_triple(p), o));
  if (all || cfg.suite == "geometry")
    for (auto& p : cfg.geometries) runs.push_back(verify_geometry(load_geometry(p), o));
  bool pass = true;
  json jr = json::array();
  for (auto& r : runs) {
    pass = pass && r.pass();
    jr.push_back(r.to_json());
  }
  emit(cfg, {{"command", "verify"}, {"suite", cfg.suite}, {"seed", std::to_string(cfg.seed)}, {"runs", jr}, {"pass", pass}});
  return pass ? 0 : 1;
}

int cmd_hp(const RunConfig& cfg) {
  require(cfg.scenarios, "scenarios");
  int q = cfg.q_max >= 0 ? cfg.q_max : 1;
  bool pass = true;
  json out = json::array();
  for (auto& p : cfg.scenarios) {
    Scenario s = load_scenario(p);
    std::vector<HomologyReport> reps;
    std::vector<std::string> skipped;
    if (cfg.flavor == "all") {
      auto hr = homology_routes(s, q, cfg.threads);
      reps = hr.reports;
      skipped = hr.skipped;
    } else {
      Flavor f;
      if (cfg.flavor == "full") f = Flavor::full;
      else if (cfg.flavor == "gnormalized" || cfg.flavor == "g-normalized") f = Flavor::gnormalized;
      else if (cfg.flavor == "twisted") f = Flavor::twisted;
      else throw usage_error("unknown flavor '" + cfg.flavor + "'");
      EngineConfig ec;
      ec.threads = cfg.threads;
      for (int par : {0, 1}) reps.push_back(compute_hp(s, f, par, q, ec));
    }
    json jr = json::array();
    for (auto& r : reps) {
      pass = pass && r.total_computed == r.total_predicted && r.stable && r.squares_to_zero;
      jr.push_back(homology_to_json(r));
    }
    out.push_back({{"scenario", s.name}, {"reports", jr}, {"skipped", skipped}});
  }
  emit(cfg, {{"command", "hp"}, {"results", out}, {"pass", pass}});
  return pass ? 0 : 1;
}

int cmd_index(const RunConfig& cfg) {
  require(cfg.triples, "triples");
  int q = cfg.q_max >= 0 ? cfg.q_max : 3;
  bool pass = true;
  json out = json::array();
  for (auto& p : cfg.triples) {
    json r = index_report(load_triple(p), q);
    for (auto& row : r["idempotents"]) pass = pass && row["pass"].get<bool>();
    out.push_back(r);
  }
  emit(cfg, {{"command", "index"}, {"results", out}, {"pass", pass}});
  return pass ? 0 : 1;
}

QuadratureOptions quadrature(const RunConfig& cfg, const GeometryInput& g) {
  QuadratureOptions o;
  o.N = cfg.N > 0 ? cfg.N : g.N;
  o.threads = cfg.threads;
  return o;
}

int cmd_invariant(const RunConfig& cfg) {
  require(cfg.geometries, "geometries");
  double tol = cfg.tol > 0 ? cfg.tol : 1e-4;
  bool pass = true;
  json out = json::array();
  for (auto& p : cfg.geometries) {
    GeometryInput g = load_geometry(p);
    json r = invariant_report(g, quadrature(cfg, g));
    if (!r["residual"].is_null()) {
      bool ok = parse_real(r["residual"].get<std::string>()) <= tol;
      r["pass"] = ok;
      pass = pass && ok;
    }
    out.push_back(r);
  }
  emit(cfg, {{"command", "invariant"}, {"tol", fmt_real(tol)}, {"results", out}, {"pass", pass}});
  return pass ? 0 : 1;
}

int cmd_pair(const RunConfig& cfg) {
  if (cfg.triples.empty() && cfg.geometries.empty()) throw usage_error("no triples or geometries given");
  bool pass = true;
  json out = json::array();
  for (auto& p : cfg.triples) {
    bool ok = true;
    out.push_back(triple_pair_report(load_triple(p), cfg.q_max >= 0 ? cfg.q_max : 2, ok));
    pass = pass && ok;
  }
  for (auto& p : cfg.geometries) {
    GeometryInput g = load_geometry(p);
    bool ok = true;
    out.push_back(geometry_pair_report(g, quadrature(cfg, g), cfg.tol > 0 ? cfg.tol : 1e-6, ok));
    pass = pass && ok;
  }
  emit(cfg, {{"command", "pair"}, {"results", out}, {"pass", pass}});
  return pass ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--scenario", cfg.scenarios, "scenario JSON file(s)");
  sub->add_option("--triple", cfg.triples, "twisted spectral triple JSON file(s)");
  sub->add_option("--geometry", cfg.geometries, "geometry JSON file(s)");
  sub->add_option("--q-max", cfg.q_max, "truncation / cocycle degree bound")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", cfg.seed, "seed for all randomized sampling");
  sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
  sub->add_option("--tol", cfg.tol, "tolerance override")->check(CLI::PositiveNumber);
  sub->add_option("--N", cfg.N, "quadrature nodes per dimension")->check(CLI::Range(2, 1 << 16));
  sub->add_option("--out", cfg.out, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncx: cyclic homology, twisted spectral triples and index densities"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, cfg);
  verify->add_option("--suite", cfg.suite, "cyclic | chern | twisted | homology | spectral | geometry | all");
  auto* hp = app.add_subcommand("hp", "periodic cyclic homology dimensions");
  add_common(hp, cfg);
  hp->add_option("--flavor", cfg.flavor, "full | gnormalized | twisted | all");
  auto* idx = app.add_subcommand("index", "index pairing of a triple");
  add_common(idx, cfg);
  auto* inv = app.add_subcommand("invariant", "conformal invariant by both routes");
  add_common(inv, cfg);
  auto* pair = app.add_subcommand("pair", "cocycle pairings");
  add_common(pair, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (verify->parsed()) return cmd_verify(cfg);
    if (hp->parsed()) return cmd_hp(cfg);
    if (idx->parsed()) return cmd_index(cfg);
    if (inv->parsed()) return cmd_invariant(cfg);
    if (pair->parsed()) return cmd_pair(cfg);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const input_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
