#pragma once

#include "ncx/chain.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace ncx {

// Row-reduced generating set of a subspace of chains in one degree.
// Pivot rows are keyed by their least tuple and have leading coefficient 1.
struct QuotientBasis {
  std::map<Tuple, Chain> rows;

  Chain reduce(Chain v) const {
    auto it = v.terms.begin();
    while (it != v.terms.end()) {
      auto p = rows.find(it->first);
      if (p == rows.end()) {
        ++it;
        continue;
      }
      Tuple key = it->first;
      C c = it->second;
      v.add(p->second, -c);
      it = v.terms.upper_bound(key);
    }
    return v;
  }

  bool insert(const Chain& v) {
    Chain r = reduce(v);
    if (r.is_zero()) return false;
    C lead = r.terms.begin()->second;
    r *= inv(lead);
    Tuple key = r.terms.begin()->first;
    rows.emplace(key, std::move(r));
    return true;
  }

  size_t rank() const { return rows.size(); }
};

// ---- crossed product chain tools ----

// theta(f0 u_{phi0} ⊗ ... ⊗ fm u_{phim}) = f0 ⊗ f1∘phi0^-1 ⊗ ... ⊗ (fm∘(phi0..phi_{m-1})^-1) u_{phi0...phim}
inline Tuple theta_tuple(const CrossedProduct& cp, const Tuple& t) {
  const auto& G = cp.G;
  int m = (int)t.size() - 1;
  Tuple u(m + 1);
  int acc = G.id;
  for (int j = 0; j <= m; ++j) {
    int x = cp.X(acc, cp.point(t[j]));
    acc = G(acc, cp.group(t[j]));
    u[j] = cp.index(x, j == m ? acc : G.id);
  }
  return u;
}

inline Chain theta(const CrossedProduct& cp, const Chain& x) {
  Chain r(x.degree);
  for (auto& [t, v] : x.terms) r.add(theta_tuple(cp, t), v);
  return r;
}

// diagonal action psi_*: each slot conjugated by u_psi
inline Tuple psi_star_tuple(const CrossedProduct& cp, int psi, const Tuple& t) {
  const auto& G = cp.G;
  Tuple u(t.size());
  for (size_t j = 0; j < t.size(); ++j)
    u[j] = cp.index(cp.X(psi, cp.point(t[j])), G(G(psi, cp.group(t[j])), G.inv(psi)));
  return u;
}

inline Chain psi_star(const CrossedProduct& cp, int psi, const Chain& x) {
  Chain r(x.degree);
  for (auto& [t, v] : x.terms) r.add(psi_star_tuple(cp, psi, t), v);
  return r;
}

// psi_{*;m,j}: a^j u_psi^-1 ⊗ u_psi a^{j+1} for j < m; u_psi a^0 ⊗ ... ⊗ a^m u_psi^-1 for j = m
inline Tuple psi_star_mj_tuple(const CrossedProduct& cp, int psi, int j, const Tuple& t) {
  const auto& G = cp.G;
  int m = (int)t.size() - 1;
  int l = j, r = j == m ? 0 : j + 1;
  Tuple u = t;
  u[l] = cp.index(cp.point(t[l]), G(cp.group(t[l]), G.inv(psi)));
  int y = cp.point(u[r]);
  u[r] = cp.index(cp.X(psi, y), G(psi, cp.group(u[r])));
  return u;
}

inline Chain psi_star_mj(const CrossedProduct& cp, int psi, int j, const Chain& x) {
  Chain r(x.degree);
  for (auto& [t, v] : x.terms) r.add(psi_star_mj_tuple(cp, psi, j, t), v);
  return r;
}

// least element of the G-orbit of a theta-form tuple
inline Tuple canonical_tuple(const CrossedProduct& cp, const Tuple& th) {
  Tuple best = th;
  for (int psi = 0; psi < cp.G.order; ++psi) {
    Tuple u = psi_star_tuple(cp, psi, th);
    if (u < best) best = std::move(u);
  }
  return best;
}

// canonical representative modulo N^G
inline Chain g_normalize(const CrossedProduct& cp, const Chain& x) {
  Chain r(x.degree);
  for (auto& [t, v] : x.terms) r.add(canonical_tuple(cp, theta_tuple(cp, t)), v);
  return r;
}

// group element carried by a tuple (product of slot elements)
inline int tuple_word(const CrossedProduct& cp, const Tuple& t) {
  int acc = cp.G.id;
  for (int i : t) acc = cp.G(acc, cp.group(i));
  return acc;
}

inline int tuple_block(const CrossedProduct& cp, const ConjugacyData& cd, const Tuple& t) {
  return cd.class_of[tuple_word(cp, t)];
}

// part of a chain lying in one conjugacy block
inline Chain block_part(const CrossedProduct& cp, const ConjugacyData& cd, const Chain& x, int block) {
  Chain r(x.degree);
  for (auto& [t, v] : x.terms)
    if (tuple_block(cp, cd, t) == block) r.add(t, v);
  return r;
}

// Generating set of N^G_m built from its definition sum_{j,psi} (psi_{*;m,j} - id) C_m.
inline QuotientBasis build_NG(const CrossedProduct& cp, int m, double cap = 6e4) {
  if (tuple_count(cp.alg.dim, m) > cap) throw std::length_error("N^G construction above size cap");
  QuotientBasis qb;
  for_each_tuple(cp.alg.dim, m, [&](const Tuple& t) {
    for (int j = 0; j <= m; ++j)
      for (int psi = 0; psi < cp.G.order; ++psi) {
        Tuple u = psi_star_mj_tuple(cp, psi, j, t);
        if (u == t) continue;
        Chain g = Chain::basis(u);
        g.add(t, C(-1));
        qb.insert(g);
      }
  });
  return qb;
}

// number of G-orbits of theta-form tuples in degree m
inline long count_g_normalized_basis(const CrossedProduct& cp, int m) {
  long n = 0;
  int npts = cp.X.npoints;
  if (npts == 0) return 0;
  std::vector<int> x(m + 1, 0);
  while (true) {
    for (int phi = 0; phi < cp.G.order; ++phi) {
      Tuple t(m + 1);
      for (int j = 0; j < m; ++j) t[j] = cp.index(x[j], cp.G.id);
      t[m] = cp.index(x[m], phi);
      if (canonical_tuple(cp, t) == t) ++n;
    }
    int k = m;
    while (k >= 0 && ++x[k] == npts) x[k--] = 0;
    if (k < 0) break;
  }
  return n;
}

// cochain is G-normalized iff it satisfies the psi-in-middle and psi-begin-end identities on all basis tuples
inline bool is_g_normalized(const CrossedProduct& cp, const Cochain& phi, double cap = 2e4) {
  int m = phi.degree;
  if (tuple_count(cp.alg.dim, m) > cap) throw std::length_error("G-normalization check above size cap");
  bool ok = true;
  for_each_tuple(cp.alg.dim, m, [&](const Tuple& t) {
    if (!ok) return;
    C v = phi(t);
    for (int j = 0; j <= m && ok; ++j)
      for (int psi = 0; psi < cp.G.order && ok; ++psi)
        if (phi(psi_star_mj_tuple(cp, psi, j, t)) != v) ok = false;
  });
  return ok;
}

// phi ∘ g_normalize
inline Cochain g_project(const CrossedProduct& cp, const Cochain& phi) {
  const CrossedProduct* p = &cp;
  return {phi.degree, [p, phi](const Tuple& t) { return phi(canonical_tuple(*p, theta_tuple(*p, t))); }};
}

// ---- twisted complexes over C(X) ----

inline Chain twisted_b(const FiniteGroup& G, const GAction& X, int phi, const Chain& x) {
  if (phi < 0 || phi >= G.order) throw std::out_of_range("twisting element outside the group");
  int m = x.degree;
  if (m < 1) throw std::domain_error("twisted boundary of a degree-0 chain");
  Chain r(m - 1);
  Tuple u(m);
  int phinv = G.inv(phi);
  for (auto& [t, v] : x.terms) {
    for (int j = 0; j < m; ++j) {
      if (t[j] != t[j + 1]) continue;
      for (int l = 0, k = 0; l <= m; ++l)
        if (l != j + 1) u[k++] = t[l];
      r.add(u, v * sign(j));
    }
    // (f^m ∘ phi) f^0 ; delta_y ∘ phi = delta_{phi^-1 y}
    if (X(phinv, t[m]) == t[0]) {
      u[0] = t[0];
      for (int l = 1; l < m; ++l) u[l] = t[l];
      r.add(u, v * sign(m));
    }
  }
  return r;
}

inline Chain twisted_T(const FiniteGroup& G, const GAction& X, int phi, const Chain& x) {
  if (phi < 0 || phi >= G.order) throw std::out_of_range("twisting element outside the group");
  int m = x.degree;
  Chain r(m);
  Tuple u(m + 1);
  for (auto& [t, v] : x.terms) {
    u[0] = X(G.inv(phi), t[m]);
    for (int l = 0; l < m; ++l) u[l + 1] = t[l];
    r.add(u, v * sign(m));
  }
  return r;
}

// A_phi = sum_{k=0}^{m} T_phi^k
inline Chain twisted_A(const FiniteGroup& G, const GAction& X, int phi, const Chain& x) {
  Chain r = x, cur = x;
  for (int k = 1; k <= x.degree; ++k) {
    cur = twisted_T(G, X, phi, cur);
    r += cur;
  }
  return r;
}

inline Chain function_B0(const GAction& X, const Chain& x) {
  Chain r(x.degree + 1);
  for (auto& [t, v] : x.terms)
    for (int p = 0; p < X.npoints; ++p) {
      Tuple u;
      u.push_back(p);
      u.insert(u.end(), t.begin(), t.end());
      r.add(u, v);
    }
  return r;
}

// B_phi = (1 - T_phi) B0 A_phi
inline Chain twisted_B(const FiniteGroup& G, const GAction& X, int phi, const Chain& x) {
  Chain y = function_B0(X, twisted_A(G, X, phi, x));
  return y - twisted_T(G, X, phi, y);
}

inline Chain point_action(const GAction& X, int psi, const Chain& x) {
  Chain r(x.degree);
  for (auto& [t, v] : x.terms) {
    Tuple u(t.size());
    for (size_t j = 0; j < t.size(); ++j) u[j] = X(psi, t[j]);
    r.add(u, v);
  }
  return r;
}

// uniform average over G_phi
inline Chain lambda_phi(const GAction& X, const ConjugacyData& cd, int phi, const Chain& x) {
  Chain r(x.degree);
  for (int psi : cd.stabilizer[phi]) r += point_action(X, psi, x);
  r *= C(Q(1, (long)cd.stabilizer[phi].size()));
  return r;
}

inline Tuple lift_tuple(const CrossedProduct& cp, int phi, const Tuple& pts) {
  Tuple t(pts.size());
  int m = (int)pts.size() - 1;
  for (int j = 0; j <= m; ++j) t[j] = cp.index(pts[j], j == m ? phi : cp.G.id);
  return t;
}

inline Chain chi_phi(const CrossedProduct& cp, int phi, const Chain& x) {
  Chain r(x.degree);
  for (auto& [t, v] : x.terms) r.add(lift_tuple(cp, phi, t), v);
  return g_normalize(cp, r);
}

inline Chain mu_phi(const CrossedProduct& cp, const ConjugacyData& cd, int phi, const Chain& x) {
  const auto& G = cp.G;
  Chain pre(x.degree);
  for (auto& [t, v] : x.terms) {
    Tuple th = theta_tuple(cp, t);
    int m = (int)th.size() - 1;
    int phi1 = cp.group(th[m]);
    int kappa = -1;
    for (int k = 0; k < G.order && kappa < 0; ++k)
      if (G(G(k, phi), G.inv(k)) == phi1) kappa = k;
    if (kappa < 0) throw std::domain_error("chain term outside the conjugacy block of the twisting element");
    // class of (x; k phi k^-1) equals class of (k^-1 x; phi)
    Tuple pts(m + 1);
    for (int j = 0; j <= m; ++j) pts[j] = cp.X(G.inv(kappa), cp.point(th[j]));
    pre.add(pts, v);
  }
  return lambda_phi(cp.X, cd, phi, pre);
}

}  // namespace ncx
