#pragma once

#include "ncx/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ncx {

struct Check {
  std::string name;
  bool pass = true;
  std::string residual = "0";  // exact checks: largest coefficient height; numeric: max abs error
  std::string detail;
};

struct SuiteResult {
  std::string suite, input;
  std::vector<Check> checks;
  bool pass() const;
  json to_json() const;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  int threads = 1;
  int samples = 210;     // random chains per scenario
  int max_degree = 6;
  int q_max = 3;         // spectral
  int hp_q_max = 1;      // homology
  int idempotents = 10;  // chern
  double tol = 0;        // 0: per-check defaults
  int N = 0;             // 0: quadrature from the input
};

// exact operator identities on random sparse chains, cochain duality, theta, twisted complexes
SuiteResult verify_cyclic(const Scenario& s, const SuiteOptions& o);
// (b + B) Ch(e) = 0 in the normalized quotient for conjugated-diagonal idempotents
SuiteResult verify_chern(const Scenario& s, const SuiteOptions& o);
// chi/mu inverse pair and intertwining on every conjugacy class
SuiteResult verify_twisted(const Scenario& s, const SuiteOptions& o);
// HP dims against the orbit-count prediction across routes
SuiteResult verify_homology(const Scenario& s, const SuiteOptions& o);
// tau cocycle, transgression, conformal transport, unitary invariance, index pairing
SuiteResult verify_spectral(const TripleInput& t, const SuiteOptions& o);
// closedness, two-route agreement, quadrature stability, fixed-point cancellation, cocycle symmetry
SuiteResult verify_geometry(const GeometryInput& g, const SuiteOptions& o);

// ---- command payloads ----

struct HomologyRoutes {
  std::vector<HomologyReport> reports;  // per flavor and parity actually run
  std::vector<std::string> skipped;     // flavor routes above the size cap
};

HomologyRoutes homology_routes(const Scenario& s, int q_max, int threads);
json index_report(const TripleInput& t, int q_max);
json invariant_report(const GeometryInput& g, const QuadratureOptions& opt);
json geometry_pair_report(const GeometryInput& g, const QuadratureOptions& opt, double tol, bool& pass);
json triple_pair_report(const TripleInput& t, int q_max, bool& pass);

// invariant of phi summed over all fixed components
cplx conformal_invariant_total(const GeometryScenario& gs, int g, const FormExpr& w, const QuadratureOptions& opt);

Q height(const Chain& x);

}  // namespace ncx
