#include "ncx/suites.hpp"

#include "ncx/gnormal.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace ncx {

namespace {

constexpr double exhaustive_cap = 5e4;

Q height(const C& z) { return std::max(abs(z.re), abs(z.im)); }

// accumulates exact residuals
struct Tally {
  std::string name;
  int count = 0, failures = 0;
  Q worst = 0;
  void add(const Q& h) {
    ++count;
    if (sgn(h) != 0) {
      ++failures;
      worst = std::max(worst, h);
    }
  }
  void add(const Chain& r) { add(height(r)); }
  void add(const C& r) { add(height(r)); }
  Check check(const std::string& extra = "") const {
    Check c{name, failures == 0, q_plain(worst), std::to_string(count) + " cases"};
    if (failures) c.detail += ", " + std::to_string(failures) + " nonzero";
    if (!extra.empty()) c.detail += ", " + extra;
    return c;
  }
};

Check numeric_check(const std::string& name, double residual, double tol, const std::string& detail) {
  return {name, residual <= tol, fmt_real(residual), detail + ", tol " + fmt_real(tol)};
}

std::mt19937_64 sample_rng(std::uint64_t seed, int i) {
  std::seed_seq ss{(std::uint32_t)seed, (std::uint32_t)(seed >> 32), (std::uint32_t)i};
  return std::mt19937_64(ss);
}

Chain power_T(Chain x, int k) {
  for (int i = 0; i < k; ++i) x = cyclic_T(x);
  return x;
}

Chain random_point_chain(int npoints, int m, int nterms, std::mt19937_64& rng) {
  Chain c(m);
  std::uniform_int_distribution<int> pick(0, npoints - 1);
  for (int k = 0; k < nterms; ++k) {
    Tuple t(m + 1);
    for (auto& x : t) x = pick(rng);
    c.add(t, rand_c(rng));
  }
  return c;
}

Cochain random_cochain_on(const Chain& support, int degree, std::mt19937_64& rng) {
  std::map<Tuple, C> vals;
  for (auto& kv : support.terms) vals[kv.first] = rand_c(rng);
  return Cochain::from_map(degree, vals);
}

// every tuple when the count is small, otherwise seeded random tuples
// (weight: evaluations per tuple)
void for_tuples(int dim, int m, int samples, std::mt19937_64& rng, const std::function<void(const Tuple&)>& fn,
                std::string& mode, int weight = 1) {
  if (dim == 0) {
    mode = "empty";
    return;
  }
  if (tuple_count(dim, m) * weight <= exhaustive_cap) {
    mode = "exhaustive";
    for_each_tuple(dim, m, fn);
    return;
  }
  mode = "sampled " + std::to_string(samples);
  std::uniform_int_distribution<int> pick(0, dim - 1);
  Tuple t(m + 1);
  for (int s = 0; s < samples; ++s) {
    for (auto& x : t) x = pick(rng);
    fn(t);
  }
}

}  // namespace

Q height(const Chain& x) {
  Q h = 0;
  for (auto& kv : x.terms) h = std::max(h, height(kv.second));
  return h;
}

bool SuiteResult::pass() const {
  for (auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json SuiteResult::to_json() const {
  json cs = json::array();
  for (auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"detail", c.detail}});
  return {{"suite", suite}, {"input", input}, {"checks", cs}, {"pass", pass()}};
}

// ---- cyclic ----

SuiteResult verify_cyclic(const Scenario& s, const SuiteOptions& o) {
  SuiteResult res{"cyclic", s.name, {}};
  CrossedProduct cp = crossed_product(s);
  const auto& A = cp.alg;
  if (A.dim == 0) {
    res.checks.push_back({"zero algebra", true, "0", "empty point set"});
    return res;
  }
  const std::vector<std::string> names = {"b^2 = 0",         "B^2 = 0",           "bB + Bb = 0",
                                          "T^(m+1) = id",    "A(1 - T) = 0",      "theta^2 = theta",
                                          "<b phi, x> = <phi, b x>", "<T phi, x> = <phi, T x>",
                                          "<B phi, x> = <phi, B x>", "b, B preserve degenerate chains"};
  int nn = (int)names.size();
  // per sample: residual height per identity, -1 when not applicable
  std::vector<std::vector<Q>> out(o.samples, std::vector<Q>(nn, Q(-1)));
  parallel_for(o.samples, o.threads, [&](int i) {
    auto rng = sample_rng(o.seed, i);
    int m = i % (o.max_degree + 1);
    Chain x = random_chain(A, m, 3, rng);
    auto& r = out[i];
    Chain bx = m >= 1 ? hochschild_b(A, x) : Chain(m - 1), Bx = connes_B(A, x);
    if (m >= 2) r[0] = height(hochschild_b(A, bx));
    r[1] = height(connes_B(A, Bx));
    if (m >= 1) r[2] = height(hochschild_b(A, Bx) + connes_B(A, bx));
    r[3] = height(power_T(x, m + 1) - x);
    r[4] = height(cyclic_A(x - cyclic_T(x)));
    Chain th = theta(cp, x);
    r[5] = height(theta(cp, th) - th);
    if (m <= 4) {
      auto pair_residual = [&](const Chain& y, const std::function<Cochain(const Cochain&)>& op) {
        Cochain phi = random_cochain_on(y, y.degree, rng);
        return height(evaluate(op(phi), x) - evaluate(phi, y));
      };
      if (m >= 1) r[6] = pair_residual(bx, [&](const Cochain& p) { return cochain_b(A, p); });
      r[7] = pair_residual(cyclic_T(x), [&](const Cochain& p) { return cochain_T(p); });
      r[8] = pair_residual(Bx, [&](const Cochain& p) { return cochain_B(A, p); });
      Chain deg = x - normalize(A, x);
      Q h = height(normalize(A, connes_B(A, deg)));
      if (m >= 1) h = std::max(h, height(normalize(A, hochschild_b(A, deg))));
      r[9] = h;
    }
  });
  for (int k = 0; k < nn; ++k) {
    Tally t{names[k]};
    for (auto& r : out)
      if (sgn(r[k]) >= 0) t.add(r[k]);
    res.checks.push_back(t.check("degrees <= " + std::to_string(k >= 6 ? std::min(4, o.max_degree) : o.max_degree)));
  }
  return res;
}

// ---- chern ----

SuiteResult verify_chern(const Scenario& s, const SuiteOptions& o) {
  SuiteResult res{"chern", s.name, {}};
  CrossedProduct cp = crossed_product(s);
  const auto& A = cp.alg;
  if (A.dim == 0) {
    res.checks.push_back({"zero algebra", true, "0", "empty point set"});
    return res;
  }
  int n = o.idempotents, qm = std::max(1, o.q_max);
  std::vector<Q> idem(n), cyc(n), tr(n);
  parallel_for(n, o.threads, [&](int i) {
    auto rng = sample_rng(o.seed, i);
    // diagonal block: the projection of C(X) onto a random nonempty set of points
    Element p;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int x = 0; x < s.X.npoints; ++x)
      if (coin(rng) || x == i % s.X.npoints) p.add(cp.index(x, s.G.id), C(1));
    AMatrix e = conjugated_projection(A, random_element(A, rng, 2), random_element(A, rng, 2), p);
    AMatrix d = amat_sub(amat_mul(A, e, e), e);
    Q h = 0;
    for (auto& el : d.e)
      for (auto& kv : el.c) h = std::max(h, height(kv.second));
    idem[i] = h;
    PeriodicChain ch = chern_character(A, e, qm);
    Q worst = 0;
    for (int q = 0; q < qm; ++q)
      worst = std::max(worst, height(normalize(A, hochschild_b(A, ch.comp[q + 1]) + connes_B(A, ch.comp[q]))));
    cyc[i] = worst;
    // Ch_0 = tr e
    Element trace;
    for (int k = 0; k < e.n; ++k) trace += e.at(k, k);
    tr[i] = height(ch.comp[0] - tensor({trace}));
  });
  Tally ti{"e^2 = e"}, tc{"(b + B) Ch(e) = 0 (normalized)"}, tt{"Ch_0(e) = tr e"};
  for (int i = 0; i < n; ++i) {
    ti.add(idem[i]);
    tc.add(cyc[i]);
    tt.add(tr[i]);
  }
  res.checks.push_back(ti.check());
  res.checks.push_back(tc.check("q_max " + std::to_string(qm)));
  res.checks.push_back(tt.check());
  return res;
}

// ---- twisted complexes, chi and mu ----

SuiteResult verify_twisted(const Scenario& s, const SuiteOptions& o) {
  SuiteResult res{"twisted", s.name, {}};
  CrossedProduct cp = crossed_product(s);
  auto cd = conjugacy_analysis(s.G, s.X);
  const auto& G = s.G;
  const auto& X = s.X;
  if (cp.alg.dim == 0) {
    res.checks.push_back({"zero algebra", true, "0", "empty point set"});
    return res;
  }
  const std::vector<std::string> names = {"mu chi = id (G_phi-invariant)", "chi mu = id (block of <phi>)",
                                          "b chi = chi b_phi",             "B chi = chi B_phi",
                                          "b_phi^2 = 0 (G_phi-invariant)", "B_phi^2 = 0 (G_phi-invariant)",
                                          "b_phi B_phi + B_phi b_phi = 0 (G_phi-invariant)"};
  int nn = (int)names.size();
  int nc = (int)cd.classes.size();
  int per = std::max(10, o.samples / 5);
  std::vector<std::vector<Q>> out(nc * per, std::vector<Q>(nn, Q(-1)));
  parallel_for(nc * per, o.threads, [&](int idx) {
    int c = idx / per, i = idx % per;
    int phi = cd.representative(c);
    auto rng = sample_rng(o.seed, idx);
    int m = i % 5;
    auto& r = out[idx];
    Chain eta = random_point_chain(X.npoints, m, 3, rng);
    Chain xi = lambda_phi(X, cd, phi, eta);
    Chain cx = chi_phi(cp, phi, xi);
    r[0] = height(mu_phi(cp, cd, phi, cx) - xi);
    Chain z = block_part(cp, cd, g_normalize(cp, random_chain(cp.alg, m, 4, rng)), c);
    r[1] = height(chi_phi(cp, phi, mu_phi(cp, cd, phi, z)) - z);
    if (m >= 1) r[2] = height(g_normalize(cp, hochschild_b(cp.alg, cx)) - chi_phi(cp, phi, twisted_b(G, X, phi, xi)));
    r[3] = height(g_normalize(cp, connes_B(cp.alg, cx)) - chi_phi(cp, phi, twisted_B(G, X, phi, xi)));
    // the twisted mixed complex lives on G_phi-invariant chains (T_phi^(m+1) = phi_*)
    Chain tb = m >= 1 ? twisted_b(G, X, phi, xi) : Chain(), tB = twisted_B(G, X, phi, xi);
    if (m >= 2) r[4] = height(twisted_b(G, X, phi, tb));
    r[5] = height(twisted_B(G, X, phi, tB));
    if (m >= 1) r[6] = height(twisted_b(G, X, phi, tB) + twisted_B(G, X, phi, tb));
  });
  for (int k = 0; k < nn; ++k) {
    Tally t{names[k]};
    for (auto& r : out)
      if (sgn(r[k]) >= 0) t.add(r[k]);
    res.checks.push_back(t.check(std::to_string(nc) + " classes, degrees <= 4"));
  }
  return res;
}

// ---- homology ----

HomologyRoutes homology_routes(const Scenario& s, int q_max, int threads) {
  HomologyRoutes hr;
  EngineConfig cfg;
  cfg.threads = threads;
  for (Flavor f : {Flavor::full, Flavor::gnormalized, Flavor::twisted})
    for (int parity : {0, 1}) {
      try {
        hr.reports.push_back(compute_hp(s, f, parity, q_max, cfg));
      } catch (const size_cap_error& e) {
        hr.skipped.push_back(std::string(flavor_name(f)) + " p" + std::to_string(parity) + ": " + e.what());
      }
    }
  return hr;
}

SuiteResult verify_homology(const Scenario& s, const SuiteOptions& o) {
  SuiteResult res{"homology", s.name, {}};
  EngineConfig cfg;
  cfg.threads = o.threads;
  int qm = o.hp_q_max;
  std::map<std::pair<int, int>, HomologyReport> reps;  // (flavor, parity)
  for (Flavor f : {Flavor::gnormalized, Flavor::twisted})
    for (int p : {0, 1}) reps[{(int)f, p}] = compute_hp(s, f, p, qm, cfg);
  // full route at the largest q_max under the size cap
  std::string full_note;
  for (int p : {0, 1}) {
    for (int q = qm; q >= 0; --q) {
      try {
        reps[{(int)Flavor::full, p}] = compute_hp(s, Flavor::full, p, q, cfg);
        full_note += " p" + std::to_string(p) + "@q" + std::to_string(q);
        break;
      } catch (const size_cap_error&) {
      }
    }
  }
  bool sq = true, stable = true;
  for (auto& [key, r] : reps) {
    sq = sq && r.squares_to_zero;
    for (auto& b : r.blocks) stable = stable && b.stable;
  }
  res.checks.push_back({"(b + B)^2 = 0", sq, "0", std::to_string(reps.size()) + " complexes"});
  for (int p : {0, 1}) {
    for (Flavor f : {Flavor::full, Flavor::gnormalized, Flavor::twisted}) {
      auto it = reps.find({(int)f, p});
      if (it == reps.end()) continue;
      const auto& r = it->second;
      bool ok = true;
      std::string d;
      int diff = 0;
      for (auto& b : r.blocks) {
        ok = ok && b.computed == b.predicted;
        diff = std::max(diff, std::abs(b.computed - b.predicted));
        d += (d.empty() ? "" : " ") + b.name + "=" + std::to_string(b.computed) + "/" + std::to_string(b.predicted);
      }
      res.checks.push_back({"HP" + std::to_string(p) + " = orbit prediction (" + flavor_name(f) + ")", ok,
                            std::to_string(diff), d + ", q_max " + std::to_string(r.q_max)});
    }
  }
  res.checks.push_back({"stable from q_max to q_max+1", stable, "0", ""});
  // route agreement at a common q_max
  for (int p : {0, 1}) {
    auto full = reps.find({(int)Flavor::full, p});
    int q = full == reps.end() ? qm : full->second.q_max;
    auto gn = q == qm ? reps[{(int)Flavor::gnormalized, p}] : compute_hp(s, Flavor::gnormalized, p, q, cfg);
    auto tw = q == qm ? reps[{(int)Flavor::twisted, p}] : compute_hp(s, Flavor::twisted, p, q, cfg);
    bool ok = true;
    for (size_t c = 0; c < gn.blocks.size(); ++c) {
      ok = ok && gn.blocks[c].computed == tw.blocks[c].computed;
      if (full != reps.end()) ok = ok && full->second.blocks[c].computed == gn.blocks[c].computed;
    }
    std::string routes = full != reps.end() ? "full = g-normalized = twisted" : "g-normalized = twisted";
    res.checks.push_back({"HP" + std::to_string(p) + " routes agree", ok, "0",
                          routes + " at q_max " + std::to_string(q)});
  }
  int t0 = reps[{(int)Flavor::twisted, 0}].total_predicted, t1 = reps[{(int)Flavor::twisted, 1}].total_predicted;
  res.checks.push_back({"total", true, "0",
                        "HP0 " + std::to_string(t0) + ", HP1 " + std::to_string(t1) + ", full route" +
                            (full_note.empty() ? " above size cap" : full_note)});
  return res;
}

// ---- spectral ----

namespace {

void cocycle_checks(const TwistedTriple& t, int q, int samples, std::mt19937_64& rng, std::vector<Check>& out) {
  const auto& A = t.alg;
  Cochain ta = memoize(tau(t, q));
  std::string mode;
  std::string sfx = "tau_" + std::to_string(2 * q);
  {
    Tally tb{"b " + sfx + " = 0"};
    Cochain bt = cochain_b(A, ta);
    for_tuples(A.dim, 2 * q + 1, samples, rng, [&](const Tuple& u) { tb.add(bt(u)); }, mode);
    out.push_back(tb.check(mode));
  }
  {
    Tally tt{"T " + sfx + " = " + sfx};
    Cochain tt_ = cochain_T(ta);
    for_tuples(A.dim, 2 * q, samples, rng, [&](const Tuple& u) { tt.add(tt_(u) - ta(u)); }, mode);
    out.push_back(tt.check(mode));
  }
  if (q > 0) {
    Tally tn{sfx + " normalized"};
    for_tuples(A.dim, 2 * q - 1, samples, rng,
               [&](const Tuple& u) {
                 for (int l = 1; l <= 2 * q; ++l) tn.add(evaluate(ta, insert_unit(A, u, l)));
               },
               mode, 2 * q * (int)A.unit.size());
    out.push_back(tn.check(mode));
  }
}

Element conjugate(const BasisAlgebra& A, const ConformalData& cf, const Element& a) {
  return multiply(A, multiply(A, cf.k, a), cf.kinv);
}

}  // namespace

SuiteResult verify_spectral(const TripleInput& in, const SuiteOptions& o) {
  const TwistedTriple& t = in.triple;
  const auto& A = t.alg;
  SuiteResult res{"spectral", t.name, {}};
  std::mt19937_64 rng(o.seed);
  try {
    validate(t);
    res.checks.push_back({"triple valid", true, "0", "hdim " + std::to_string(t.hdim())});
  } catch (const validation_error& e) {
    res.checks.push_back({"triple valid", false, "1", e.what()});
    return res;
  }
  {
    bool ok = tau_coefficient(0) == Q(1, 2) && tau_coefficient(1) == Q(-1, 4) && tau_coefficient(2) == Q(1, 24);
    res.checks.push_back({"c_0 = 1/2, c_1 = -1/4, c_2 = 1/24", ok, "0", ""});
  }
  const int samples = 400;
  for (int q = 0; q <= o.q_max; ++q) cocycle_checks(t, q, samples, rng, res.checks);
  bool invertible = inverse(t.D).has_value();
  if (invertible) {
    auto kappa = calibrate_transgression(t);
    if (kappa)
      res.checks.push_back({"transgression calibration", *kappa == transgression_kappa, q_plain(abs(*kappa - transgression_kappa)),
                            "kappa " + q_plain(*kappa) + ", frozen " + q_plain(transgression_kappa)});
    for (int q = 0; q <= 1; ++q) {
      Cochain d = memoize(transgression_phi(t, q) - transgression_psi(t, q));
      C lam(transgression_lambda(q));
      Cochain bd = cochain_b(A, d), Bd = cochain_B(A, d);
      Cochain up = memoize(tau(t, q + 1)), dn = memoize(tau(t, q));
      std::string mode;
      Tally ta{"tau_" + std::to_string(2 * q + 2) + " = lambda b(phi - psi)"};
      for_tuples(A.dim, 2 * q + 2, samples, rng, [&](const Tuple& u) { ta.add(up(u) - lam * bd(u)); }, mode);
      res.checks.push_back(ta.check(mode));
      Tally tb{"tau_" + std::to_string(2 * q) + " = -lambda B(phi - psi)"};
      for_tuples(A.dim, 2 * q, samples, rng, [&](const Tuple& u) { tb.add(dn(u) + lam * Bd(u)); }, mode);
      res.checks.push_back(tb.check(mode));
    }
    // conformal transport with a random invertible k = m* m
    std::optional<ConformalData> cf;
    for (int tries = 0; tries < 50 && !cf; ++tries) {
      try {
        cf = conformal_factor(A, unit_element(A) + random_element(A, rng, 2));
      } catch (const validation_error&) {
      }
    }
    if (cf) {
      TwistedTriple tk = conformal_deform(t, *cf);
      Tally tc{"conformal transport tau^(kDk) = tau^D(k . k^-1)"};
      std::string mode;
      for (int q = 0; q <= 1; ++q) {
        Cochain lhs = memoize(tau(tk, q)), rhs = memoize(tau(t, q));
        for_tuples(A.dim, 2 * q, 60, rng,
                   [&](const Tuple& u) {
                     std::vector<Element> conj;
                     for (int i : u) conj.push_back(conjugate(A, *cf, Element::basis(i)));
                     tc.add(lhs(u) - evaluate(rhs, tensor(conj)));
                   },
                   mode);
      }
      res.checks.push_back(tc.check("q <= 1"));
    } else {
      res.checks.push_back({"conformal transport tau^(kDk) = tau^D(k . k^-1)", false, "1", "no invertible k found"});
    }
  } else {
    res.checks.push_back({"transgression", true, "0", "skipped: D not invertible"});
  }
  {
    Matrix U = random_even_unitary(t.grading, rng);
    TwistedTriple tu = unitary_conjugate(t, U);
    Tally tv{"unitary invariance tau^(U*DU) = tau^D"};
    std::string mode;
    for (int q = 0; q <= std::min(2, o.q_max); ++q) {
      Cochain a = memoize(tau(tu, q)), b = memoize(tau(t, q));
      for_tuples(A.dim, 2 * q, 200, rng, [&](const Tuple& u) { tv.add(a(u) - b(u)); }, mode);
    }
    res.checks.push_back(tv.check("q <= " + std::to_string(std::min(2, o.q_max))));
  }
  // index pairing
  std::vector<NamedIdempotent> ids{{"unit", scalar_amatrix(unit_element(A)), Q(0)}};
  for (auto& e : in.idempotents) ids.push_back(e);
  for (auto& e : ids) {
    IndexValue iv = index(t, e.e);
    Tally tp{"index pairing <tau-bar_2q, Ch(" + e.name + ")> = index"};
    std::string vals;
    for (int q = 0; q <= o.q_max; ++q) {
      C p = tau_bar_pairing(t, e.e, q);
      tp.add(p - C(iv.value));
      vals += (q ? "," : "") + c_str(p);
    }
    res.checks.push_back(tp.check("index " + q_plain(iv.value) + ", pairings q=0.." + std::to_string(o.q_max) + " " + vals));
    if (e.expect)
      res.checks.push_back({"index(" + e.name + ") = " + q_plain(*e.expect), iv.value == *e.expect,
                            q_plain(abs(iv.value - *e.expect)), ""});
  }
  {
    // componentwise pairing against the cocycle shortcut on a random conjugated idempotent
    AMatrix e = conjugated_projection(A, random_element(A, rng, 2), random_element(A, rng, 2));
    int qm = std::min(2, o.q_max);
    PeriodicChain ch = chern_character(A, e, qm);
    Tally ts{"<tau_2q, Ch_2q(e)> = shortcut pairing"};
    for (int q = 0; q <= qm; ++q) ts.add(evaluate(tau(t, q), ch.comp[q]) - tau_pairing(t, e, q));
    res.checks.push_back(ts.check("q <= " + std::to_string(qm)));
  }
  return res;
}

// ---- geometry ----

cplx conformal_invariant_total(const GeometryScenario& gs, int g, const FormExpr& w, const QuadratureOptions& opt) {
  std::set<int> dims;
  for (auto& fc : gs.group[g].fixed) dims.insert(fc.dim);
  cplx s = 0;
  for (int a : dims) s += conformal_invariant_direct(gs, g, a, w, opt);
  return s;
}

namespace {

bool is_identity(const GeometryScenario& gs, int g) { return same_map(gs.chart, gs.group[g].map, AffineMap::identity(gs.n())); }

std::vector<Expr> function_pool(const Chart& ch) {
  std::vector<Expr> pool;
  for (int i = 0; i < ch.dim(); ++i) {
    pool.push_back(trig(true, 1, i));
    pool.push_back(trig(false, 1, i));
    pool.push_back(trig(false, 2, i));
    for (int j = i + 1; j < ch.dim(); ++j) pool.push_back(trig(true, 1, i) * trig(false, 1, j));
  }
  return pool;
}

}  // namespace

SuiteResult verify_geometry(const GeometryInput& g, const SuiteOptions& o) {
  const auto& gs = g.gs;
  SuiteResult res{"geometry", gs.name, {}};
  QuadratureOptions opt;
  opt.N = o.N > 0 ? o.N : g.N;
  opt.threads = o.threads;
  double tol_route = o.tol > 0 ? o.tol : 1e-4;
  try {
    check_closed(gs, g.omega, 1e-8);
    res.checks.push_back({"omega closed", true, "0", g.omega_text});
  } catch (const validation_error& e) {
    res.checks.push_back({"omega closed", false, "1", e.what()});
  }
  int phi = gs.find(g.phi);
  cplx direct = conformal_invariant_total(gs, phi, g.omega, opt);
  if (is_identity(gs, phi)) {
    cplx pair = conformal_invariant_pairing(gs, g.omega, opt);
    res.checks.push_back(numeric_check("two routes agree", std::abs(direct - pair), tol_route,
                                       "direct " + fmt_real(direct.real()) + "+" + fmt_real(direct.imag()) + "i, pairing " +
                                           fmt_real(pair.real()) + "+" + fmt_real(pair.imag()) + "i"));
  }
  {
    QuadratureOptions o2 = opt;
    o2.N = 2 * opt.N;
    cplx d2 = conformal_invariant_total(gs, phi, g.omega, o2);
    double scale = std::abs(d2);
    double rel = scale > 1e-12 ? std::abs(direct - d2) / scale : std::abs(direct - d2);
    res.checks.push_back(numeric_check("quadrature doubling stable", rel, 1e-6,
                                       "N " + std::to_string(opt.N) + " -> " + std::to_string(o2.N)));
  }
  {
    FormExpr one = FormExpr::function(gs.n(), constant(1));
    double worst = 0;
    int count = 0;
    for (size_t k = 0; k < gs.group.size(); ++k) {
      const auto& fx = gs.group[k].fixed;
      if (fx.empty()) continue;
      bool isolated = std::all_of(fx.begin(), fx.end(), [](const FixedComponent& c) { return c.dim == 0; });
      if (!isolated) continue;
      worst = std::max(worst, std::abs(conformal_invariant_direct(gs, (int)k, 0, one, opt)));
      ++count;
    }
    if (count)
      res.checks.push_back(numeric_check("fixed-point sum cancels", worst, 1e-10, std::to_string(count) + " rotations"));
  }
  if (gs.n() >= 2) {
    auto pool = function_pool(gs.chart);
    auto rng = sample_rng(o.seed, 0);
    std::uniform_int_distribution<int> pf(0, (int)pool.size() - 1), pg(0, (int)gs.group.size() - 1);
    QuadratureOptions oq = opt;
    oq.N = std::min(opt.N, 32);
    double worst_T = 0, worst_L = 0;
    const int samples = 6;
    int id = *group_element(gs, AffineMap::identity(gs.n()));
    // even samples use the identity word, odd ones random words
    for (int s = 0; s < samples; ++s) {
      std::vector<CocycleArg> args;
      for (int j = 0; j < 3; ++j) args.push_back({pool[pf(rng)], s % 2 ? pg(rng) : id});
      cplx v = cm_cocycle_eval(gs, 1, args, oq);
      std::vector<CocycleArg> rot{args[2], args[0], args[1]};
      worst_T = std::max(worst_T, std::abs(cm_cocycle_eval(gs, 1, rot, oq) - v));
      auto lin = args;
      Expr extra = pool[pf(rng)];
      lin[0].f = args[0].f + constant(2) * extra;
      auto alt = args;
      alt[0].f = extra;
      worst_L = std::max(worst_L, std::abs(cm_cocycle_eval(gs, 1, lin, oq) - v - 2.0 * cm_cocycle_eval(gs, 1, alt, oq)));
    }
    double tol = o.tol > 0 ? o.tol : 1e-8;
    res.checks.push_back(numeric_check("T phi_2 = phi_2", worst_T, tol, std::to_string(samples) + " tuples"));
    res.checks.push_back(numeric_check("phi_2 multilinear", worst_L, tol, std::to_string(samples) + " tuples"));
  }
  for (auto& p : g.pairings) {
    if (!p.expect) continue;
    std::vector<CocycleArg> args;
    for (size_t j = 0; j < p.f.size(); ++j) args.push_back({parse_function(p.f[j], gs.chart.coords), gs.find(p.g[j])});
    cplx v = cm_cocycle_eval(gs, p.q, args, opt);
    res.checks.push_back(numeric_check("pairing " + p.name, std::abs(v - *p.expect), o.tol > 0 ? o.tol : 1e-6,
                                       "value " + fmt_real(v.real()) + "+" + fmt_real(v.imag()) + "i"));
  }
  return res;
}

// ---- command payloads ----

json index_report(const TripleInput& in, int q_max) {
  const TwistedTriple& t = in.triple;
  std::vector<NamedIdempotent> ids{{"unit", scalar_amatrix(unit_element(t.alg)), Q(0)}};
  for (auto& e : in.idempotents) ids.push_back(e);
  json rows = json::array();
  for (auto& e : ids) {
    IndexValue iv = index(t, e.e);
    json pairs = json::array();
    bool ok = true;
    for (int q = 0; q <= q_max; ++q) {
      C p = tau_bar_pairing(t, e.e, q);
      ok = ok && p == C(iv.value);
      pairs.push_back(c_str(p));
    }
    if (e.expect) ok = ok && iv.value == *e.expect;
    json row = {{"name", e.name},
                {"index", q_plain(iv.value)},
                {"dim_ker_plus", std::to_string(iv.dim_ker_plus)},
                {"dim_coker_plus", std::to_string(iv.dim_coker_plus)},
                {"dim_ker_minus", std::to_string(iv.dim_ker_minus)},
                {"dim_coker_minus", std::to_string(iv.dim_coker_minus)},
                {"pairing", pairs},
                {"pass", ok}};
    if (e.expect) row["expect"] = q_plain(*e.expect);
    rows.push_back(row);
  }
  return {{"triple", t.name}, {"q_max", std::to_string(q_max)}, {"idempotents", rows}};
}

json invariant_report(const GeometryInput& g, const QuadratureOptions& opt) {
  const auto& gs = g.gs;
  int phi = gs.find(g.phi);
  json comps = json::array();
  for (auto& fc : gs.group[phi].fixed) comps.push_back({{"label", fc.label}, {"dim", std::to_string(fc.dim)}});
  cplx direct = conformal_invariant_total(gs, phi, g.omega, opt);
  json j = {{"geometry", gs.name},
            {"phi", g.phi},
            {"omega", g.omega_text},
            {"N", std::to_string(opt.N)},
            {"fixed_components", comps},
            {"direct", fmt_cplx(direct)}};
  if (is_identity(gs, phi)) {
    cplx pair = conformal_invariant_pairing(gs, g.omega, opt);
    j["pairing"] = fmt_cplx(pair);
    j["residual"] = fmt_real(std::abs(direct - pair));
  } else {
    j["pairing"] = nullptr;
    j["residual"] = nullptr;
  }
  return j;
}

json geometry_pair_report(const GeometryInput& g, const QuadratureOptions& opt, double tol, bool& pass) {
  const auto& gs = g.gs;
  json rows = json::array();
  pass = true;
  for (auto& p : g.pairings) {
    std::vector<CocycleArg> args;
    for (size_t j = 0; j < p.f.size(); ++j) args.push_back({parse_function(p.f[j], gs.chart.coords), gs.find(p.g[j])});
    cplx v = cm_cocycle_eval(gs, p.q, args, opt);
    json row = {{"name", p.name}, {"q", std::to_string(p.q)}, {"f", p.f}, {"g", p.g}, {"value", fmt_cplx(v)}};
    if (p.expect) {
      double err = std::abs(v - *p.expect);
      row["expect"] = fmt_cplx(*p.expect);
      row["error"] = fmt_real(err);
      row["pass"] = err <= tol;
      pass = pass && err <= tol;
    }
    rows.push_back(row);
  }
  return {{"geometry", gs.name}, {"N", std::to_string(opt.N)}, {"pairings", rows}};
}

json triple_pair_report(const TripleInput& in, int q_max, bool& pass) {
  const TwistedTriple& t = in.triple;
  std::vector<NamedIdempotent> ids{{"unit", scalar_amatrix(unit_element(t.alg)), Q(0)}};
  for (auto& e : in.idempotents) ids.push_back(e);
  json rows = json::array();
  pass = true;
  for (auto& e : ids) {
    PeriodicChain ch = chern_character(t.alg, e.e, q_max);
    json qs = json::array();
    for (int q = 0; q <= q_max; ++q) {
      C comp = evaluate(tau(t, q), ch.comp[q]);
      C cut = tau_pairing(t, e.e, q);
      qs.push_back({{"q", std::to_string(q)}, {"componentwise", c_str(comp)}, {"shortcut", c_str(cut)}, {"agree", comp == cut}});
      pass = pass && comp == cut;
    }
    rows.push_back({{"name", e.name}, {"pairings", qs}});
  }
  return {{"triple", t.name}, {"q_max", std::to_string(q_max)}, {"idempotents", rows}};
}

}  // namespace ncx
