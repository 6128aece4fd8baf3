#pragma once

#include "ncx/scalar.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncx {

struct structure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FiniteGroup {
  int order = 0;
  std::vector<int> mul;  // row-major, mul[g*order+h] = gh
  std::vector<int> inv_;
  int id = 0;
  std::vector<std::string> names;

  int operator()(int g, int h) const { return mul[g * order + h]; }
  int inv(int g) const { return inv_[g]; }
  const std::string& name(int g) const { return names[g]; }

  static FiniteGroup from_table(int n, std::vector<int> table, std::vector<std::string> names = {}) {
    FiniteGroup G;
    G.order = n;
    G.mul = std::move(table);
    if (n <= 0 || (int)G.mul.size() != n * n) throw structure_error("group table must be order x order");
    for (int v : G.mul)
      if (v < 0 || v >= n) throw structure_error("group table entry out of range");
    G.id = -1;
    for (int e = 0; e < n && G.id < 0; ++e) {
      bool ok = true;
      for (int g = 0; g < n && ok; ++g) ok = G(e, g) == g && G(g, e) == g;
      if (ok) G.id = e;
    }
    if (G.id < 0) throw structure_error("group table has no identity");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (G(G(a, b), c) != G(a, G(b, c))) throw structure_error("group table is not associative");
    G.inv_.assign(n, -1);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        if (G(h, g) == G.id) G.inv_[g] = h;
    for (int g = 0; g < n; ++g)
      if (G.inv_[g] < 0 || G(g, G.inv_[g]) != G.id) throw structure_error("group element without inverse");
    if (names.empty())
      for (int g = 0; g < n; ++g) names.push_back(g == G.id ? "id" : "g" + std::to_string(g));
    if ((int)names.size() != n) throw structure_error("names size differs from order");
    G.names = std::move(names);
    return G;
  }

  static FiniteGroup trivial() { return from_table(1, {0}, {"id"}); }

  static FiniteGroup cyclic(int n) {
    std::vector<int> t(n * n);
    std::vector<std::string> nm;
    for (int a = 0; a < n; ++a) {
      nm.push_back(a == 0 ? "id" : "r" + std::to_string(a));
      for (int b = 0; b < n; ++b) t[a * n + b] = (a + b) % n;
    }
    return from_table(n, t, nm);
  }
};

// left action, act(g, x)
struct GAction {
  int npoints = 0;
  std::vector<int> table;  // table[g*npoints+x]
  int operator()(int g, int x) const { return table[g * npoints + x]; }

  static GAction make(const FiniteGroup& G, int n, std::vector<int> t) {
    GAction A{n, std::move(t)};
    if ((int)A.table.size() != G.order * n) throw structure_error("action table must be order x points");
    for (int v : A.table)
      if (v < 0 || v >= n) throw structure_error("action table entry out of range");
    for (int x = 0; x < n; ++x)
      if (A(G.id, x) != x) throw structure_error("identity does not act trivially");
    for (int g = 0; g < G.order; ++g)
      for (int h = 0; h < G.order; ++h)
        for (int x = 0; x < n; ++x)
          if (A(G(g, h), x) != A(g, A(h, x))) throw structure_error("action is not compatible with the group law");
    return A;
  }
};

// k[phi][x], positive rationals
struct ConformalCocycle {
  std::vector<std::vector<Q>> k;

  static ConformalCocycle trivial(const FiniteGroup& G, const GAction& X) {
    return {std::vector<std::vector<Q>>(G.order, std::vector<Q>(X.npoints, Q(1)))};
  }

  // k_phi(x) = h(phi^-1 x) / h(x)
  static ConformalCocycle coboundary(const FiniteGroup& G, const GAction& X, const std::vector<Q>& h) {
    ConformalCocycle c;
    c.k.assign(G.order, std::vector<Q>(X.npoints));
    for (int g = 0; g < G.order; ++g)
      for (int x = 0; x < X.npoints; ++x) c.k[g][x] = h[X(G.inv(g), x)] / h[x];
    return c;
  }

  ConformalCocycle inverse() const {
    ConformalCocycle c = *this;
    for (auto& row : c.k)
      for (auto& v : row) v = 1 / v;
    return c;
  }

  void validate(const FiniteGroup& G, const GAction& X) const {
    if ((int)k.size() != G.order) throw validation_error("cocycle needs one row per group element");
    for (auto& row : k) {
      if ((int)row.size() != X.npoints) throw validation_error("cocycle row needs one value per point");
      for (auto& v : row)
        if (sgn(v) <= 0) throw validation_error("cocycle values must be positive");
    }
    for (int x = 0; x < X.npoints; ++x)
      if (k[G.id][x] != 1) throw validation_error("cocycle must be 1 on the identity");
    for (int a = 0; a < G.order; ++a)
      for (int b = 0; b < G.order; ++b)
        for (int x = 0; x < X.npoints; ++x)
          if (k[G(a, b)][x] != k[a][x] * k[b][X(G.inv(a), x)])
            throw validation_error("cocycle law fails at (" + G.name(a) + ", " + G.name(b) + ", " +
                                   std::to_string(x) + ")");
  }

  // entrywise rational square root, empty if some value is not a square
  std::optional<ConformalCocycle> square_root() const {
    ConformalCocycle c = *this;
    for (auto& row : c.k)
      for (auto& v : row) {
        mpz_class n = v.get_num(), d = v.get_den();
        if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
        mpz_class rn = sqrt(n), rd = sqrt(d);
        v = Q(rn, rd);
        v.canonicalize();
      }
    return c;
  }
};

struct ConjugacyData {
  std::vector<std::vector<int>> classes;  // sorted, by least member
  std::vector<int> class_of;
  std::vector<std::vector<int>> stabilizer;  // centralizer G_phi
  std::vector<std::vector<int>> fixed;       // X^phi

  int representative(int c) const { return classes[c].front(); }
};

inline ConjugacyData conjugacy_analysis(const FiniteGroup& G, const GAction& X) {
  ConjugacyData D;
  D.class_of.assign(G.order, -1);
  for (int g = 0; g < G.order; ++g) {
    if (D.class_of[g] >= 0) continue;
    std::set<int> cl;
    for (int h = 0; h < G.order; ++h) cl.insert(G(G(h, g), G.inv(h)));
    for (int c : cl) D.class_of[c] = (int)D.classes.size();
    D.classes.emplace_back(cl.begin(), cl.end());
  }
  D.stabilizer.resize(G.order);
  D.fixed.resize(G.order);
  for (int g = 0; g < G.order; ++g) {
    for (int h = 0; h < G.order; ++h)
      if (G(h, g) == G(g, h)) D.stabilizer[g].push_back(h);
    for (int x = 0; x < X.npoints; ++x)
      if (X(g, x) == x) D.fixed[g].push_back(x);
  }
  return D;
}

// orbits of a subgroup H on a subset S (S assumed H-stable)
inline std::vector<std::vector<int>> orbits(const GAction& X, const std::vector<int>& H, const std::vector<int>& S) {
  std::vector<std::vector<int>> out;
  std::set<int> seen;
  for (int x : S) {
    if (seen.count(x)) continue;
    std::set<int> orb;
    for (int h : H) orb.insert(X(h, x));
    seen.insert(orb.begin(), orb.end());
    out.emplace_back(orb.begin(), orb.end());
  }
  return out;
}

struct Scenario {
  std::string name;
  FiniteGroup G;
  GAction X;
  ConformalCocycle k;
};

}  // namespace ncx
