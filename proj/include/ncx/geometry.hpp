#pragma once

#include "ncx/forms.hpp"
#include "ncx/group.hpp"
#include "ncx/rank.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncx {

struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// matrices of forms (curvature)
using FormMatrix = std::vector<std::vector<Form>>;

inline FormMatrix form_matmul(const FormMatrix& a, const FormMatrix& b) {
  size_t n = a.size();
  int dim = n ? a[0][0].n : 0;
  FormMatrix r(n, std::vector<Form>(n, Form(dim)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k)
      for (size_t j = 0; j < n; ++j) r[i][j] += wedge(a[i][k], b[k][j]);
  return r;
}

inline Form form_trace(const FormMatrix& a) {
  Form t(a.empty() ? 0 : a[0][0].n);
  for (size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

// coefficients of log((z/2)/sinh(z/2)) = sum_k a_k z^{2k}
inline double ahat_log_coefficient(int k) {
  static const double a[] = {0, -1.0 / 24, 1.0 / 2880, -1.0 / 181440, 1.0 / 9676800};
  if (k < 1 || k > 4) throw std::out_of_range("A-hat series coefficient out of range");
  return a[k];
}

// det^{1/2}((R/2)/sinh(R/2)) = exp(1/2 sum_k a_k tr R^{2k}), truncated at form degree dim
inline Form a_hat(const FormMatrix& R, int dim, int extra_terms = 0) {
  int n = R.empty() ? dim : R[0][0].n;
  Form L(n);
  if (!R.empty()) {
    FormMatrix R2 = form_matmul(R, R), P = R2;
    int kmax = dim / 4 + extra_terms;
    for (int k = 1; k <= kmax && k <= 4; ++k) {
      L += (0.5 * ahat_log_coefficient(k)) * form_trace(P);
      P = form_matmul(P, R2);
    }
  }
  Form r = form_exp(L);
  for (int I = 0; I < 16; ++I)
    if (__builtin_popcount(I) > dim) r.c[I] = 0;
  return r;
}

// one normal 2-plane: signed rotation angle and normal curvature 2-form (R^N = r J)
struct NormalBlock {
  double angle = 0;  // in (0, pi]
  int orientation = 1;
  Form r;
};

inline double signed_angle(const NormalBlock& b) { return b.orientation * b.angle; }

// det^{-1/2}(1 - phi^N e^{-R^N}) = prod_j 1/(2 sin((alpha_j - r_j)/2)), branch fixed at r = 0
inline Form nu_phi(const std::vector<NormalBlock>& blocks, int n) {
  Form r(n, 1);
  for (auto& b : blocks) {
    if (!(b.angle > 0) || b.angle > M_PI + 1e-12) throw geometry_error("normal angle must lie in (0, pi]");
    double a = signed_angle(b) / 2;
    if (std::abs(std::sin(a)) < 1e-12) throw geometry_error("singular normal block: angle 0");
    Form u = b.r;
    u *= 0.5;
    u.c[0] = 0;
    // cos u, sin u for nilpotent u
    Form cu(n, 1), su(n), term(n, 1);
    for (int k = 1; k <= n; ++k) {
      term = wedge(term, u);
      term *= 1.0 / k;
      if (k % 2 == 0)
        cu += ((k / 2) % 2 ? -1.0 : 1.0) * term;
      else
        su += (((k - 1) / 2) % 2 ? -1.0 : 1.0) * term;
    }
    Form s = std::sin(a) * cu - std::cos(a) * su;  // sin(a - u)
    s *= 2.0;
    r = wedge(r, form_inverse(s));
  }
  return r;
}

// ---- geometry scenarios ----

struct Chart {
  std::vector<std::string> coords;
  std::vector<char> polar;  // coordinate ranges over [0, pi] (else periodic [0, 2 pi))
  int dim() const { return (int)coords.size(); }
};

// curvature block on the 2-plane (i, j): R_ij = -s, R_ji = s
struct CurvatureBlock {
  int i = 0, j = 0;
  FormExpr s;
};

struct FixedComponent {
  int dim = 0;
  std::vector<int> free;      // chart coordinates parametrizing the component (ascending)
  std::vector<double> pins;   // value of every chart coordinate not in free
  std::vector<CurvatureBlock> tangent;
  std::vector<CurvatureBlock> normal;
  std::vector<double> angles;      // one per normal block
  std::vector<int> orientations;   // sign datum per normal block
  std::string label;
};

struct Isometry {
  std::string name;
  AffineMap map;
  std::vector<FixedComponent> fixed;
};

struct GeometryScenario {
  std::string name, manifold;
  std::vector<double> params;
  Chart chart;
  std::vector<Isometry> group;
  int n() const { return chart.dim(); }

  int find(const std::string& nm) const {
    for (size_t g = 0; g < group.size(); ++g)
      if (group[g].name == nm) return (int)g;
    throw geometry_error("unknown group element '" + nm + "'");
  }
};

inline bool same_map(const Chart& ch, const AffineMap& a, const AffineMap& b) {
  for (int i = 0; i < a.dim(); ++i) {
    if (a.perm[i] != b.perm[i] || a.sign[i] != b.sign[i]) return false;
    double d = a.shift[i] - b.shift[i];
    if (!ch.polar[i]) d = std::remainder(d, 2 * M_PI);
    if (std::abs(d) > 1e-9) return false;
  }
  return true;
}

inline std::optional<int> group_element(const GeometryScenario& g, const AffineMap& m) {
  for (size_t k = 0; k < g.group.size(); ++k)
    if (same_map(g.chart, g.group[k].map, m)) return (int)k;
  return std::nullopt;
}

// factor descriptors for products of round spheres and flat tori
struct FactorMotion {
  double rotation = 0;            // sphere: rotation about the polar axis
  double shift[2] = {0, 0};       // torus: translation
};

inline double reduce_angle(double a) {
  a = std::fmod(a, 2 * M_PI);
  if (a < 0) a += 2 * M_PI;
  if (a < 1e-12 || 2 * M_PI - a < 1e-12) return 0;
  return a;
}

// factors: "S2" or "T2"; motions: per group element, per factor
inline GeometryScenario make_product_geometry(const std::string& name, const std::string& manifold,
                                              const std::vector<std::string>& factors, std::vector<double> params,
                                              const std::vector<std::string>& names,
                                              const std::vector<std::vector<FactorMotion>>& motions) {
  GeometryScenario g;
  g.name = name;
  g.manifold = manifold;
  g.params = std::move(params);
  int ntor = 0;
  for (auto& f : factors) {
    if (f == "S2") {
      g.chart.coords.push_back("theta");
      g.chart.coords.push_back("phi");
      g.chart.polar.push_back(1);
      g.chart.polar.push_back(0);
    } else if (f == "T2") {
      bool single = std::count(factors.begin(), factors.end(), "T2") == 1;
      std::string sx = single ? "" : std::to_string(++ntor);
      g.chart.coords.push_back("x" + sx);
      g.chart.coords.push_back("y" + sx);
      g.chart.polar.push_back(0);
      g.chart.polar.push_back(0);
    } else {
      throw geometry_error("unknown factor '" + f + "'");
    }
  }
  int n = g.chart.dim();
  for (size_t e = 0; e < motions.size(); ++e) {
    if (motions[e].size() != factors.size()) throw geometry_error("motion needs one entry per factor");
    Isometry iso;
    iso.name = names[e];
    iso.map = AffineMap::identity(n);
    // per factor: list of (free?, pins, normal?, angle, orientation) alternatives
    struct Piece {
      bool whole;
      double pin = 0;
      int orientation = 1;
      double angle = 0;
    };
    std::vector<std::vector<Piece>> pieces;
    bool empty = false;
    for (size_t f = 0; f < factors.size(); ++f) {
      int c0 = 2 * (int)f;
      const auto& mo = motions[e][f];
      if (factors[f] == "S2") {
        iso.map.shift[c0 + 1] = mo.rotation;
        double b = reduce_angle(mo.rotation);
        if (b == 0) {
          pieces.push_back({{true}});
        } else {
          double mag = b <= M_PI ? b : 2 * M_PI - b;
          int s = b <= M_PI ? 1 : -1;
          // rotation about the outward normal at the north pole, against it at the south pole
          pieces.push_back({{false, 0.0, s, mag}, {false, M_PI, -s, mag}});
        }
      } else {
        iso.map.shift[c0] = mo.shift[0];
        iso.map.shift[c0 + 1] = mo.shift[1];
        if (reduce_angle(mo.shift[0]) == 0 && reduce_angle(mo.shift[1]) == 0)
          pieces.push_back({{true}});
        else
          empty = true;
      }
    }
    if (!empty) {
      // cartesian product of pieces
      std::vector<size_t> idx(pieces.size(), 0);
      while (true) {
        FixedComponent fc;
        fc.pins.assign(n, 0);
        std::string label;
        for (size_t f = 0; f < pieces.size(); ++f) {
          int c0 = 2 * (int)f;
          const Piece& p = pieces[f][idx[f]];
          CurvatureBlock blk;
          blk.i = c0;
          blk.j = c0 + 1;
          blk.s = FormExpr(n);
          if (factors[f] == "S2") blk.s.terms[(1 << c0) | (1 << (c0 + 1))] = trig(true, 1, c0);
          if (p.whole) {
            fc.free.push_back(c0);
            fc.free.push_back(c0 + 1);
            fc.dim += 2;
            fc.tangent.push_back(blk);
            label += factors[f];
          } else {
            fc.pins[c0] = p.pin;
            fc.normal.push_back(blk);
            fc.angles.push_back(p.angle);
            fc.orientations.push_back(p.orientation);
            label += p.pin == 0 ? "N" : "S";
          }
          if (f + 1 < pieces.size()) label += "x";
        }
        fc.label = label;
        iso.fixed.push_back(fc);
        size_t k = pieces.size();
        while (k > 0 && ++idx[k - 1] == pieces[k - 1].size()) idx[--k] = 0;
        if (k == 0) break;
      }
    }
    g.group.push_back(iso);
  }
  return g;
}

// ---- quadrature ----

struct QuadratureOptions {
  int N = 64;
  int threads = 1;
};

inline void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), pp = 1;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1, p2 = 0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = 0.5 * (a + b) - 0.5 * (b - a) * z;
    w[i] = (b - a) / ((1 - z * z) * pp * pp);
  }
}

// pairwise summation in a fixed tree order
inline cplx pairwise_sum(const std::vector<cplx>& v, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    cplx s = 0;
    for (size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

// integral of the top-degree component of a form over a fixed component;
// integrand(x) returns the full form on M at chart point x
inline cplx integrate_component(const Chart& ch, const FixedComponent& fc, const QuadratureOptions& q,
                                const std::function<Form(const double*)>& integrand) {
  int n = ch.dim(), a = (int)fc.free.size();
  std::vector<std::vector<double>> xs(a), ws(a);
  size_t total = 1;
  for (int k = 0; k < a; ++k) {
    int c = fc.free[k];
    if (ch.polar[c]) {
      gauss_legendre(q.N, 0, M_PI, xs[k], ws[k]);
    } else {
      for (int i = 0; i < q.N; ++i) {
        xs[k].push_back(2 * M_PI * i / q.N);
        ws[k].push_back(2 * M_PI / q.N);
      }
    }
    total *= q.N;
  }
  int mask = 0;
  for (int c : fc.free) mask |= 1 << c;
  const size_t chunk = 4096;
  size_t nchunks = (total + chunk - 1) / chunk;
  std::vector<cplx> partial(nchunks);
  parallel_for((int)nchunks, q.threads, [&](int c) {
    std::vector<cplx> vals;
    std::vector<double> x(n);
    for (size_t node = c * chunk; node < std::min(total, (c + 1) * chunk); ++node) {
      for (int i = 0; i < n; ++i) x[i] = fc.pins.empty() ? 0 : fc.pins[i];
      double w = 1;
      size_t r = node;
      for (int k = a - 1; k >= 0; --k) {
        size_t id = r % q.N;
        r /= q.N;
        x[fc.free[k]] = xs[k][id];
        w *= ws[k][id];
      }
      Form f = integrand(x.data());
      vals.push_back(w * f.c[mask]);
    }
    partial[c] = pairwise_sum(vals, 0, vals.size());
  });
  return pairwise_sum(partial, 0, partial.size());
}

// curvature blocks as a dim x dim form matrix restricted to listed coordinates
inline FormMatrix curvature_matrix(int n, const std::vector<CurvatureBlock>& blocks, const double* x) {
  int m = 2 * (int)blocks.size();
  FormMatrix R(m, std::vector<Form>(m, Form(n)));
  for (size_t b = 0; b < blocks.size(); ++b) {
    Form s = blocks[b].s.at(x);
    R[2 * b + 1][2 * b] = s;
    R[2 * b][2 * b + 1] = -1.0 * s;
  }
  return R;
}

inline Form restrict_to(const Form& f, const FixedComponent& fc) {
  int mask = 0;
  for (int c : fc.free) mask |= 1 << c;
  Form r(f.n);
  for (int I = 0; I < 16; ++I)
    if ((I & ~mask) == 0) r.c[I] = f.c[I];
  return r;
}

// A-hat of the tangent curvature and nu_phi of the normal data, pulled back to the component
inline Form characteristic_form(const Chart& ch, const FixedComponent& fc, const double* x) {
  int n = ch.dim();
  Form ah = a_hat(curvature_matrix(n, fc.tangent, x), fc.dim);
  std::vector<NormalBlock> nb;
  for (size_t b = 0; b < fc.normal.size(); ++b)
    nb.push_back({fc.angles[b], fc.orientations[b], restrict_to(fc.normal[b].s.at(x), fc)});
  return restrict_to(wedge(ah, nu_phi(nb, n)), fc);
}

inline cplx minus_i_pow(int k) {
  static const cplx p[4] = {1, cplx(0, -1), -1, cplx(0, 1)};
  return p[((k % 4) + 4) % 4];
}

struct CocycleArg {
  Expr f;
  int g = 0;  // group element index
};

// phi_2q(f0 u_g0, ..., f2q u_g2q) =
//   (-i)^{n/2}/(2q)! sum_a (2 pi)^{-a/2} int_{M^g_a} A-hat ∧ nu_g ∧ f0 d f^1 ∧ ... ∧ d f^2q
inline cplx cm_cocycle_eval(const GeometryScenario& gs, int q, const std::vector<CocycleArg>& args,
                            const QuadratureOptions& opt) {
  int n = gs.n();
  if ((int)args.size() != 2 * q + 1) throw std::invalid_argument("cocycle of degree 2q needs 2q+1 arguments");
  for (auto& a : args)
    if (a.g < 0 || a.g >= (int)gs.group.size()) throw geometry_error("group element outside the scenario group");
  if (2 * q > n) return 0;
  // hat f^j = f^j ∘ (g0 ... g_{j-1})^-1
  std::vector<Expr> fh;
  std::vector<std::vector<Expr>> grad;
  AffineMap prefix = AffineMap::identity(n);
  for (int j = 0; j <= 2 * q; ++j) {
    Expr e = j == 0 ? args[0].f : substitute(args[j].f, inverse(prefix));
    fh.push_back(e);
    std::vector<Expr> gr;
    if (j > 0)
      for (int i = 0; i < n; ++i) gr.push_back(derivative(e, i));
    grad.push_back(gr);
    prefix = compose(prefix, gs.group[args[j].g].map);
  }
  auto g = group_element(gs, prefix);
  if (!g) throw geometry_error("composed group word is not a member of the scenario group");
  cplx total = 0;
  for (auto& fc : gs.group[*g].fixed) {
    cplx val = integrate_component(gs.chart, fc, opt, [&](const double* x) {
      Form w(n, eval(fh[0], x));
      for (int j = 1; j <= 2 * q; ++j) {
        Form d(n);
        for (int i = 0; i < n; ++i) d.c[1 << i] = eval(grad[j][i], x);
        w = wedge(w, d);
      }
      return wedge(characteristic_form(gs.chart, fc, x), restrict_to(w, fc));
    });
    total += std::pow(2 * M_PI, -fc.dim / 2.0) * val;
  }
  double fact = 1;
  for (int k = 2; k <= 2 * q; ++k) fact *= k;
  return minus_i_pow(n / 2) / fact * total;
}

// ---- geometric chains and the two-route invariant ----

struct GeometricTerm {
  double coef = 1;
  std::vector<Expr> f;  // f0 ⊗ f1 ⊗ ... ⊗ fm (u_phi on the last slot is implicit)
};

using GeometricChain = std::vector<GeometricTerm>;

inline double factorial(int m) {
  double r = 1;
  for (int k = 2; k <= m; ++k) r *= k;
  return r;
}

// finite decomposition of a form into monomials f0 df1 ∧ ... ∧ dfm using
// dx = cos x d(sin x) - sin x d(cos x) in every coordinate
inline GeometricChain monomial_decomposition(const FormExpr& w, int m) {
  GeometricChain out;
  for (auto& [I, c] : w.terms) {
    if (__builtin_popcount(I) != m) continue;
    std::vector<int> idx;
    for (int i = 0; i < w.n; ++i)
      if (I >> i & 1) idx.push_back(i);
    for (int choice = 0; choice < (1 << m); ++choice) {
      GeometricTerm t;
      Expr f0 = c;
      t.f.push_back(nullptr);
      for (int k = 0; k < m; ++k) {
        int v = idx[k];
        if (choice >> k & 1) {
          f0 = f0 * (-trig(true, 1, v));
          t.f.push_back(trig(false, 1, v));
        } else {
          f0 = f0 * trig(false, 1, v);
          t.f.push_back(trig(true, 1, v));
        }
      }
      t.f[0] = f0;
      out.push_back(t);
    }
  }
  return out;
}

// epsilon(f0 df1..dfm) = 1/m! sum_sigma eps(sigma) f0 ⊗ f^sigma(1) ⊗ ... ⊗ f^sigma(m)
inline GeometricChain epsilon_map(const GeometricChain& monomials) {
  GeometricChain out;
  for (auto& t : monomials) {
    int m = (int)t.f.size() - 1;
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i + 1;
    do {
      int inv = 0;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) inv += perm[a] > perm[b];
      GeometricTerm s;
      s.coef = t.coef * ((inv & 1) ? -1.0 : 1.0) / factorial(m);
      s.f.push_back(t.f[0]);
      for (int k : perm) s.f.push_back(t.f[k]);
      out.push_back(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

// alpha(f0 ⊗ ... ⊗ fm) = 1/m! f0 df1 ∧ ... ∧ dfm
inline FormExpr alpha_map(const GeometricChain& c, int n) {
  FormExpr r(n);
  for (auto& t : c) {
    int m = (int)t.f.size() - 1;
    FormExpr w = FormExpr::function(n, constant(t.coef / factorial(m)) * t.f[0]);
    for (int k = 1; k <= m; ++k) {
      FormExpr d = differential(n, t.f[k]), nw(n);
      for (auto& [I, a] : w.terms)
        for (auto& [J, b] : d.terms)
          if (!(I & J)) nw.add(I | J, constant(wedge_sign(I, J)) * a * b);
      w = nw;
    }
    for (auto& [I, e] : w.terms) r.add(I, e);
  }
  return r;
}

// eta_omega = m! chi_phi(epsilon(omega)) on the chain level
inline GeometricChain eta_omega(const FormExpr& w, int m) {
  GeometricChain c = epsilon_map(monomial_decomposition(w, m));
  for (auto& t : c) t.coef *= factorial(m);
  return c;
}

inline void check_closed(const GeometryScenario& gs, const FormExpr& w, double tol, int N = 16) {
  FormExpr dw = exterior_d(w);
  int n = gs.n();
  std::vector<double> x(n);
  size_t total = 1;
  for (int i = 0; i < n; ++i) total *= N;
  for (size_t node = 0; node < total; ++node) {
    size_t r = node;
    for (int i = 0; i < n; ++i) {
      size_t id = r % N;
      r /= N;
      x[i] = gs.chart.polar[i] ? M_PI * (id + 0.5) / N : 2 * M_PI * id / N;
    }
    if (dw.at(x.data()).max_abs() > tol) throw validation_error("form is not closed: |d omega| above tolerance");
  }
}

struct InvariantResult {
  cplx direct, pairing;
  bool has_pairing = false;
};

// I(omega) = (-i)^{n/2} (2 pi)^{-a/2} int_{M^phi_a} A-hat ∧ nu_phi ∧ omega
inline cplx conformal_invariant_direct(const GeometryScenario& gs, int g, int a, const FormExpr& w,
                                       const QuadratureOptions& opt) {
  int n = gs.n();
  cplx total = 0;
  for (auto& fc : gs.group[g].fixed) {
    if (fc.dim != a) continue;
    cplx val = integrate_component(gs.chart, fc, opt, [&](const double* x) {
      return wedge(characteristic_form(gs.chart, fc, x), restrict_to(w.at(x), fc));
    });
    total += std::pow(2 * M_PI, -a / 2.0) * val;
  }
  return minus_i_pow(n / 2) * total;
}

// sum_q <phi_2q, eta_{omega_2q}>, identity component only
inline cplx conformal_invariant_pairing(const GeometryScenario& gs, const FormExpr& w, const QuadratureOptions& opt) {
  int n = gs.n();
  int id = -1;
  for (size_t k = 0; k < gs.group.size(); ++k)
    if (same_map(gs.chart, gs.group[k].map, AffineMap::identity(n))) id = (int)k;
  if (id < 0) throw geometry_error("scenario group has no identity");
  cplx total = 0;
  for (int m = 0; m <= n; m += 2) {
    for (auto& t : eta_omega(w, m)) {
      std::vector<CocycleArg> args;
      for (auto& f : t.f) args.push_back({f, id});
      total += t.coef * cm_cocycle_eval(gs, m / 2, args, opt);
    }
  }
  return total;
}

}  // namespace ncx
