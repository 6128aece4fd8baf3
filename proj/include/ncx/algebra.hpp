#pragma once

#include "ncx/group.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace ncx {

// Algebra with a basis closed under products up to zero: e_i e_j is 0 or a single e_k.
// Covers C(X)⋊G, matrix units, C(X) and group algebras.
struct BasisAlgebra {
  int dim = 0;
  std::vector<int> prod;  // dim*dim, -1 for zero
  std::vector<int> star;  // e_i* = e_{star[i]}
  std::vector<int> unit;  // 1 = sum of these basis elements
  std::vector<std::string> labels;

  int mul(int i, int j) const { return prod[i * dim + j]; }

  static BasisAlgebra matrix_units(int n) {
    BasisAlgebra A;
    A.dim = n * n;
    A.prod.assign(A.dim * A.dim, -1);
    A.star.resize(A.dim);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        A.labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
        A.star[i * n + j] = j * n + i;
        for (int l = 0; l < n; ++l) A.prod[(i * n + j) * A.dim + (j * n + l)] = i * n + l;
      }
    for (int i = 0; i < n; ++i) A.unit.push_back(i * n + i);
    return A;
  }

  // upper triangular matrix units of size n (a non-semisimple test algebra)
  static BasisAlgebra upper_triangular(int n) {
    BasisAlgebra A;
    std::vector<std::pair<int, int>> idx;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) idx.push_back({i, j});
    A.dim = (int)idx.size();
    A.prod.assign(A.dim * A.dim, -1);
    A.star.assign(A.dim, -1);
    for (int a = 0; a < A.dim; ++a) {
      A.labels.push_back("E" + std::to_string(idx[a].first + 1) + std::to_string(idx[a].second + 1));
      for (int b = 0; b < A.dim; ++b)
        if (idx[a].second == idx[b].first)
          for (int c = 0; c < A.dim; ++c)
            if (idx[c].first == idx[a].first && idx[c].second == idx[b].second) A.prod[a * A.dim + b] = c;
      if (idx[a].first == idx[a].second) A.unit.push_back(a);
    }
    return A;
  }

  static BasisAlgebra functions(int n) {
    BasisAlgebra A;
    A.dim = n;
    A.prod.assign(n * n, -1);
    for (int x = 0; x < n; ++x) {
      A.prod[x * n + x] = x;
      A.star.push_back(x);
      A.unit.push_back(x);
      A.labels.push_back("d" + std::to_string(x));
    }
    return A;
  }
};

// sparse element over a BasisAlgebra; ordered by basis index
struct Element {
  std::map<int, C> c;

  bool is_zero() const { return c.empty(); }
  void add(int i, const C& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = c.try_emplace(i, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }
  C coeff(int i) const {
    auto it = c.find(i);
    return it == c.end() ? C(0) : it->second;
  }
  static Element basis(int i, const C& v = C(1)) {
    Element e;
    e.add(i, v);
    return e;
  }

  Element& operator+=(const Element& o) {
    for (auto& [i, v] : o.c) add(i, v);
    return *this;
  }
  Element& operator-=(const Element& o) {
    for (auto& [i, v] : o.c) add(i, -v);
    return *this;
  }
  Element& operator*=(const C& s) {
    if (s.is_zero()) {
      c.clear();
      return *this;
    }
    for (auto& kv : c) kv.second *= s;
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const C& s) { return a *= s; }
  friend Element operator*(const C& s, Element a) { return a *= s; }
  friend bool operator==(const Element& a, const Element& b) { return a.c == b.c; }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
};

inline Element unit_element(const BasisAlgebra& A) {
  Element e;
  for (int i : A.unit) e.add(i, C(1));
  return e;
}

inline Element multiply(const BasisAlgebra& A, const Element& a, const Element& b) {
  Element r;
  for (auto& [i, u] : a.c)
    for (auto& [j, v] : b.c) {
      int k = A.mul(i, j);
      if (k >= 0) r.add(k, u * v);
    }
  return r;
}

inline Element involution(const BasisAlgebra& A, const Element& a) {
  Element r;
  for (auto& [i, v] : a.c) r.add(A.star[i], v.conj());
  return r;
}

inline Element random_element(const BasisAlgebra& A, std::mt19937_64& rng, int nterms, bool complex = true) {
  Element e;
  if (A.dim == 0) return e;
  std::uniform_int_distribution<int> pick(0, A.dim - 1);
  for (int t = 0; t < nterms; ++t) e.add(pick(rng), rand_c(rng, complex));
  return e;
}

// Linear endomorphism of the algebra, stored by basis images.
struct LinearMap {
  std::vector<Element> img;

  static LinearMap identity(int dim) {
    LinearMap L;
    for (int i = 0; i < dim; ++i) L.img.push_back(Element::basis(i));
    return L;
  }
  static LinearMap diagonal(const std::vector<C>& d) {
    LinearMap L;
    for (size_t i = 0; i < d.size(); ++i) L.img.push_back(Element::basis((int)i, d[i]));
    return L;
  }
  Element operator()(const Element& a) const {
    Element r;
    for (auto& [i, v] : a.c) r += img[i] * v;
    return r;
  }
  bool is_diagonal() const {
    for (size_t i = 0; i < img.size(); ++i)
      for (auto& kv : img[i].c)
        if (kv.first != (int)i) return false;
    return true;
  }
  friend bool operator==(const LinearMap& a, const LinearMap& b) { return a.img == b.img; }
};

inline LinearMap compose(const LinearMap& f, const LinearMap& g) {
  LinearMap r;
  for (auto& e : g.img) r.img.push_back(f(e));
  return r;
}

// checks multiplicativity and unitality on all basis pairs
inline bool is_automorphism(const BasisAlgebra& A, const LinearMap& s) {
  if ((int)s.img.size() != A.dim) return false;
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) {
      int k = A.mul(i, j);
      Element lhs = k >= 0 ? s.img[k] : Element{};
      if (lhs != multiply(A, s.img[i], s.img[j])) return false;
    }
  return s(unit_element(A)) == unit_element(A);
}

// Finite crossed product C(X)⋊G, basis delta_x u_phi at index x*|G| + phi.
struct CrossedProduct {
  FiniteGroup G;
  GAction X;
  BasisAlgebra alg;

  int index(int x, int phi) const { return x * G.order + phi; }
  int point(int i) const { return i / G.order; }
  int group(int i) const { return i % G.order; }

  CrossedProduct() = default;
  CrossedProduct(FiniteGroup g, GAction x) : G(std::move(g)), X(std::move(x)) {
    int n = X.npoints, o = G.order;
    alg.dim = n * o;
    alg.prod.assign(alg.dim * alg.dim, -1);
    alg.star.resize(alg.dim);
    for (int x0 = 0; x0 < n; ++x0)
      for (int p = 0; p < o; ++p) {
        int i = index(x0, p);
        alg.labels.push_back("d" + std::to_string(x0) + "u" + G.name(p));
        // (f u_phi)* = (conj f o phi) u_phi^-1 ; delta_x o phi = delta_{phi^-1 x}
        alg.star[i] = index(X(G.inv(p), x0), G.inv(p));
        for (int y = 0; y < n; ++y)
          for (int q = 0; q < o; ++q)
            if (x0 == X(p, y)) alg.prod[i * alg.dim + index(y, q)] = index(x0, G(p, q));
      }
    for (int x0 = 0; x0 < n; ++x0) alg.unit.push_back(index(x0, G.id));
  }

  void check_same(const CrossedProduct& o) const {
    if (o.G.order != G.order || o.X.npoints != X.npoints || o.G.mul != G.mul || o.X.table != X.table)
      throw structure_error("elements belong to different crossed products");
  }

  Element delta(int x, int phi, const C& v = C(1)) const { return Element::basis(index(x, phi), v); }

  // function f = sum f(x) delta_x times u_phi
  Element fu(const std::vector<C>& f, int phi) const {
    Element e;
    for (int x = 0; x < X.npoints; ++x) e.add(index(x, phi), f[x]);
    return e;
  }

  Element u(int phi) const {
    Element e;
    for (int x = 0; x < X.npoints; ++x) e.add(index(x, phi), C(1));
    return e;
  }

  // sigma(f u_phi) = k_phi f u_phi
  LinearMap sigma_from_cocycle(const ConformalCocycle& k) const {
    k.validate(G, X);
    std::vector<C> d(alg.dim);
    for (int x = 0; x < X.npoints; ++x)
      for (int p = 0; p < G.order; ++p) d[index(x, p)] = C(k.k[p][x]);
    return LinearMap::diagonal(d);
  }
};

inline CrossedProduct crossed_product(const Scenario& s) { return CrossedProduct(s.G, s.X); }

// Matrices over an algebra, row-major N x N.
struct AMatrix {
  int n = 0;
  std::vector<Element> e;

  Element& at(int i, int j) { return e[i * n + j]; }
  const Element& at(int i, int j) const { return e[i * n + j]; }
  static AMatrix zero(int n) { return AMatrix{n, std::vector<Element>(n * n)}; }
  friend bool operator==(const AMatrix& a, const AMatrix& b) { return a.n == b.n && a.e == b.e; }
};

inline AMatrix amat_identity(const BasisAlgebra& A, int n) {
  AMatrix M = AMatrix::zero(n);
  for (int i = 0; i < n; ++i) M.at(i, i) = unit_element(A);
  return M;
}

inline AMatrix amat_mul(const BasisAlgebra& A, const AMatrix& a, const AMatrix& b) {
  AMatrix r = AMatrix::zero(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int k = 0; k < a.n; ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < a.n; ++j) r.at(i, j) += multiply(A, a.at(i, k), b.at(k, j));
    }
  return r;
}

inline AMatrix amat_sub(AMatrix a, const AMatrix& b) {
  for (size_t i = 0; i < a.e.size(); ++i) a.e[i] -= b.e[i];
  return a;
}

inline AMatrix amat_apply(const LinearMap& s, AMatrix a) {
  for (auto& x : a.e) x = s(x);
  return a;
}

inline bool amat_is_zero(const AMatrix& a) {
  for (auto& x : a.e)
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace ncx
