#pragma once

#include "ncx/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <vector>

namespace ncx {

using Tuple = std::vector<int>;

struct Chain {
  int degree = 0;
  std::map<Tuple, C> terms;

  Chain() = default;
  explicit Chain(int m) : degree(m) {}

  bool is_zero() const { return terms.empty(); }
  void add(const Tuple& t, const C& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = terms.try_emplace(t, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  void add(const Chain& o, const C& s = C(1)) {
    if (o.is_zero()) return;
    if (o.degree != degree) throw std::domain_error("adding chains of different degree");
    for (auto& [t, v] : o.terms) add(t, v * s);
  }
  Chain& operator+=(const Chain& o) { add(o); return *this; }
  Chain& operator-=(const Chain& o) { add(o, C(-1)); return *this; }
  Chain& operator*=(const C& s) {
    if (s.is_zero()) terms.clear();
    for (auto& kv : terms) kv.second *= s;
    return *this;
  }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator*(const C& s, Chain a) { return a *= s; }
  friend bool operator==(const Chain& a, const Chain& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.degree == b.degree && a.terms == b.terms;
  }
  friend bool operator!=(const Chain& a, const Chain& b) { return !(a == b); }

  static Chain basis(const Tuple& t, const C& v = C(1)) {
    Chain c((int)t.size() - 1);
    c.add(t, v);
    return c;
  }
};

inline C sign(int k) { return (k & 1) ? C(-1) : C(1); }

// elementary tensor a0 ⊗ ... ⊗ am of algebra elements
inline Chain tensor(const std::vector<Element>& a) {
  Chain c((int)a.size() - 1);
  std::map<Tuple, C> cur{{Tuple{}, C(1)}};
  for (auto& e : a) {
    std::map<Tuple, C> nxt;
    for (auto& [t, v] : cur)
      for (auto& [i, w] : e.c) {
        Tuple u = t;
        u.push_back(i);
        nxt[u] += v * w;
      }
    cur = std::move(nxt);
  }
  for (auto& [t, v] : cur) c.add(t, v);
  return c;
}

inline Chain random_chain(const BasisAlgebra& A, int m, int nterms, std::mt19937_64& rng, bool complex = true) {
  Chain c(m);
  std::uniform_int_distribution<int> pick(0, A.dim - 1);
  for (int k = 0; k < nterms; ++k) {
    Tuple t(m + 1);
    for (auto& x : t) x = pick(rng);
    c.add(t, rand_c(rng, complex));
  }
  return c;
}

// ---- chain operators ----

inline Chain hochschild_b(const BasisAlgebra& A, const Chain& x) {
  int m = x.degree;
  if (m < 1) throw std::domain_error("Hochschild boundary of a degree-0 chain");
  Chain r(m - 1);
  Tuple u(m);
  for (auto& [t, v] : x.terms) {
    for (int j = 0; j < m; ++j) {
      int p = A.mul(t[j], t[j + 1]);
      if (p < 0) continue;
      for (int l = 0, k = 0; l <= m; ++l) {
        if (l == j + 1) continue;
        u[k++] = l == j ? p : t[l];
      }
      r.add(u, v * sign(j));
    }
    int p = A.mul(t[m], t[0]);
    if (p >= 0) {
      u[0] = p;
      for (int l = 1; l < m; ++l) u[l] = t[l];
      r.add(u, v * sign(m));
    }
  }
  return r;
}

inline Chain cyclic_T(const Chain& x) {
  int m = x.degree;
  Chain r(m);
  Tuple u(m + 1);
  for (auto& [t, v] : x.terms) {
    u[0] = t[m];
    for (int l = 0; l < m; ++l) u[l + 1] = t[l];
    r.add(u, v * sign(m));
  }
  return r;
}

// A = 1 + T + ... + T^m
inline Chain cyclic_A(const Chain& x) {
  Chain r = x, cur = x;
  for (int k = 1; k <= x.degree; ++k) {
    cur = cyclic_T(cur);
    r += cur;
  }
  return r;
}

inline Chain B0(const BasisAlgebra& A, const Chain& x) {
  Chain r(x.degree + 1);
  for (auto& [t, v] : x.terms)
    for (int e : A.unit) {
      Tuple u;
      u.reserve(t.size() + 1);
      u.push_back(e);
      u.insert(u.end(), t.begin(), t.end());
      r.add(u, v);
    }
  return r;
}

// B = (1 - T) B0 A
inline Chain connes_B(const BasisAlgebra& A, const Chain& x) {
  Chain y = B0(A, cyclic_A(x));
  return y - cyclic_T(y);
}

// S_j on degree m, 1 <= j <= m-1, lands in degree m-2
inline Chain S_j(const BasisAlgebra& A, const Chain& x, int j) {
  int m = x.degree;
  Chain r(m - 2);
  for (auto& [t, v] : x.terms) {
    for (int l = 0; l <= j - 2; ++l) {
      int p = A.mul(t[l], t[l + 1]);
      int q = A.mul(t[j], t[j + 1]);
      if (p < 0 || q < 0) continue;
      Tuple u;
      for (int s = 0; s <= m; ++s) {
        if (s == l + 1 || s == j + 1) continue;
        u.push_back(s == l ? p : s == j ? q : t[s]);
      }
      r.add(u, v * sign(l));
    }
    int p = A.mul(t[j - 1], t[j]);
    if (p < 0) continue;
    p = A.mul(p, t[j + 1]);
    if (p < 0) continue;
    Tuple u;
    for (int s = 0; s <= m; ++s) {
      if (s == j || s == j + 1) continue;
      u.push_back(s == j - 1 ? p : t[s]);
    }
    r.add(u, v * sign(j + 1));
  }
  return r;
}

inline Q periodicity_coefficient(int m) { return Q(1, m * (m - 1)); }

// S = 1/(m(m-1)) sum_{j=1}^{m-1} (-1)^j S_j
inline Chain periodicity_S(const BasisAlgebra& A, const Chain& x) {
  int m = x.degree;
  if (m < 2) throw std::domain_error("periodicity operator needs degree >= 2");
  Chain r(m - 2);
  for (int j = 1; j <= m - 1; ++j) r.add(S_j(A, x, j), sign(j));
  r *= C(periodicity_coefficient(m));
  return r;
}

inline bool is_cyclic(const Chain& x) { return cyclic_T(x) == x; }

// (1/(m+1)) A x is cyclic
inline Chain cyclic_average(const Chain& x) {
  Chain r = cyclic_A(x);
  r *= C(Q(1, x.degree + 1));
  return r;
}

// Reduction modulo degenerate chains (some slot j >= 1 equal to 1). The first unit summand
// is traded for 1 - (other unit summands) in slots >= 1, so representatives avoid it there.
inline Chain normalize(const BasisAlgebra& A, const Chain& x) {
  Chain r(x.degree);
  if (A.unit.empty()) return r;
  int p = A.unit.front();
  for (auto& [t, v] : x.terms) {
    std::vector<std::pair<Tuple, C>> cur{{Tuple{t[0]}, v}};
    for (size_t j = 1; j < t.size(); ++j) {
      std::vector<std::pair<Tuple, C>> nxt;
      for (auto& [u, w] : cur) {
        if (t[j] != p) {
          auto s = u;
          s.push_back(t[j]);
          nxt.push_back({std::move(s), w});
        } else {
          for (size_t k = 1; k < A.unit.size(); ++k) {
            auto s = u;
            s.push_back(A.unit[k]);
            nxt.push_back({std::move(s), -w});
          }
        }
      }
      cur = std::move(nxt);
    }
    for (auto& [u, w] : cur) r.add(u, w);
  }
  return r;
}

// degenerate generator a0 ⊗ ... ⊗ a_{l-1} ⊗ 1 ⊗ a_l ⊗ ...
inline Chain insert_unit(const BasisAlgebra& A, const Tuple& t, int l) {
  Chain r((int)t.size());
  for (int e : A.unit) {
    Tuple u = t;
    u.insert(u.begin() + l, e);
    r.add(u, C(1));
  }
  return r;
}

// beta: f0 ⊗ sum_sigma eps(sigma) f^{sigma(1)} ⊗ ... ⊗ f^{sigma(m)}
inline Chain antisymmetrize(const std::vector<Element>& f, int cap = 6) {
  int m = (int)f.size() - 1;
  if (m < 0) throw std::domain_error("antisymmetrize needs at least one argument");
  if (m > cap) throw std::domain_error("antisymmetrize degree above cap");
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i + 1;
  Chain r(m);
  do {
    int inv = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) inv += perm[a] > perm[b];
    std::vector<Element> slot{f[0]};
    for (int k : perm) slot.push_back(f[k]);
    r.add(tensor(slot), sign(inv));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return r;
}

// ---- cochains: functionals on basis tuples ----

struct Cochain {
  int degree = 0;
  std::function<C(const Tuple&)> f;

  C operator()(const Tuple& t) const { return f ? f(t) : C(0); }

  static Cochain zero(int m) {
    return {m, [](const Tuple&) { return C(0); }};
  }
  static Cochain from_map(int m, std::map<Tuple, C> vals) {
    auto p = std::make_shared<const std::map<Tuple, C>>(std::move(vals));
    return {m, [p](const Tuple& t) {
              auto it = p->find(t);
              return it == p->end() ? C(0) : it->second;
            }};
  }
};

inline C evaluate(const Cochain& phi, const Chain& eta) {
  if (eta.is_zero()) return C(0);
  if (phi.degree != eta.degree) throw std::domain_error("pairing of cochain and chain of different degree");
  C s(0);
  for (auto& [t, v] : eta.terms) {
    C w = phi(t);
    if (!w.is_zero()) s += v * w;
  }
  return s;
}

inline Cochain operator+(const Cochain& a, const Cochain& b) {
  return {a.degree, [a, b](const Tuple& t) { return a(t) + b(t); }};
}
inline Cochain operator-(const Cochain& a, const Cochain& b) {
  return {a.degree, [a, b](const Tuple& t) { return a(t) - b(t); }};
}
inline Cochain operator*(const C& s, const Cochain& a) {
  return {a.degree, [a, s](const Tuple& t) { return s * a(t); }};
}

// memoizes values; thread-safe
inline Cochain memoize(const Cochain& a) {
  struct Memo {
    std::mutex mu;
    std::map<Tuple, C> vals;
  };
  auto memo = std::make_shared<Memo>();
  return {a.degree, [a, memo](const Tuple& t) {
            {
              std::lock_guard<std::mutex> g(memo->mu);
              auto it = memo->vals.find(t);
              if (it != memo->vals.end()) return it->second;
            }
            C v = a(t);
            std::lock_guard<std::mutex> g(memo->mu);
            memo->vals.emplace(t, v);
            return v;
          }};
}

// (b phi)(a0..a_{m+1}) = sum_j (-1)^j phi(.., a_j a_{j+1}, ..) + (-1)^{m+1} phi(a_{m+1} a0, a1, .., a_m)
inline Cochain cochain_b(const BasisAlgebra& A, const Cochain& phi) {
  int m = phi.degree;
  const BasisAlgebra* Ap = &A;
  return {m + 1, [Ap, phi, m](const Tuple& t) {
            C s(0);
            Tuple u(m + 1);
            for (int j = 0; j <= m; ++j) {
              int p = Ap->mul(t[j], t[j + 1]);
              if (p < 0) continue;
              for (int l = 0, k = 0; l <= m + 1; ++l) {
                if (l == j + 1) continue;
                u[k++] = l == j ? p : t[l];
              }
              s += sign(j) * phi(u);
            }
            int p = Ap->mul(t[m + 1], t[0]);
            if (p >= 0) {
              u[0] = p;
              for (int l = 1; l <= m; ++l) u[l] = t[l];
              s += sign(m + 1) * phi(u);
            }
            return s;
          }};
}

// (T phi)(a0..am) = (-1)^m phi(am, a0, .., a_{m-1})
inline Cochain cochain_T(const Cochain& phi) {
  int m = phi.degree;
  return {m, [phi, m](const Tuple& t) {
            Tuple u(m + 1);
            u[0] = t[m];
            for (int l = 0; l < m; ++l) u[l + 1] = t[l];
            return sign(m) * phi(u);
          }};
}

inline Cochain cochain_A(const Cochain& phi) {
  int m = phi.degree;
  return {m, [phi, m](const Tuple& t) {
            C s(0);
            Tuple u = t;
            C sg(1);
            for (int k = 0; k <= m; ++k) {
              s += sg * phi(u);
              // T^k phi(t) = (-1)^{mk} phi(rotated)
              std::rotate(u.begin(), u.end() - 1, u.end());
              sg *= sign(m);
            }
            return s;
          }};
}

// (B0 phi)(a0..a_{m-1}) = phi(1, a0, .., a_{m-1})
inline Cochain cochain_B0(const BasisAlgebra& A, const Cochain& phi) {
  int m = phi.degree;
  if (m < 1) throw std::domain_error("B0 of a degree-0 cochain");
  std::vector<int> unit = A.unit;
  return {m - 1, [phi, unit](const Tuple& t) {
            C s(0);
            Tuple u;
            u.reserve(t.size() + 1);
            u.push_back(0);
            u.insert(u.end(), t.begin(), t.end());
            for (int e : unit) {
              u[0] = e;
              s += phi(u);
            }
            return s;
          }};
}

// B = A B0 (1 - T)
inline Cochain cochain_B(const BasisAlgebra& A, const Cochain& phi) {
  return cochain_A(cochain_B0(A, phi - cochain_T(phi)));
}

// transpose of the chain S
inline Cochain cochain_S(const BasisAlgebra& A, const Cochain& phi) {
  int m = phi.degree;
  const BasisAlgebra* Ap = &A;
  return {m + 2, [Ap, phi](const Tuple& t) { return evaluate(phi, periodicity_S(*Ap, Chain::basis(t))); }};
}

// all tuples of length m+1 over dim letters, lexicographic
template <class F>
void for_each_tuple(int dim, int m, F&& fn) {
  if (dim == 0) return;
  Tuple t(m + 1, 0);
  while (true) {
    fn(static_cast<const Tuple&>(t));
    int k = m;
    while (k >= 0 && ++t[k] == dim) t[k--] = 0;
    if (k < 0) break;
  }
}

inline double tuple_count(int dim, int m) {
  double n = 1;
  for (int k = 0; k <= m; ++k) n *= dim;
  return n;
}

inline std::map<Tuple, C> materialize(const BasisAlgebra& A, const Cochain& phi, double cap = 2e5) {
  if (tuple_count(A.dim, phi.degree) > cap) throw std::length_error("cochain materialization above size cap");
  std::map<Tuple, C> out;
  for_each_tuple(A.dim, phi.degree, [&](const Tuple& t) {
    C v = phi(t);
    if (!v.is_zero()) out.emplace(t, v);
  });
  return out;
}

// ---- periodic objects ----

struct PeriodicChain {
  int parity = 0;
  std::vector<Chain> comp;  // comp[q] has degree 2q + parity
};

struct PeriodicCochain {
  int parity = 0;
  std::vector<Cochain> comp;
};

inline C pairing(const PeriodicCochain& phi, const PeriodicChain& eta) {
  if (phi.parity != eta.parity) throw std::domain_error("pairing of periodic objects of different parity");
  C s(0);
  for (size_t q = 0; q < phi.comp.size() && q < eta.comp.size(); ++q) s += evaluate(phi.comp[q], eta.comp[q]);
  return s;
}

// (b + B) on a truncated periodic chain; result has parity 1 - i and the same number of slots
inline PeriodicChain periodic_boundary(const BasisAlgebra& A, const PeriodicChain& x) {
  PeriodicChain r;
  r.parity = 1 - x.parity;
  int Q = (int)x.comp.size();
  for (int q = 0; q < Q; ++q) {
    int n = 2 * q + r.parity;
    Chain c(n);
    // b from degree n+1, B from degree n-1
    for (auto& y : x.comp) {
      if (y.is_zero()) continue;
      if (y.degree == n + 1) c += hochschild_b(A, y);
      if (y.degree == n - 1) c += connes_B(A, y);
    }
    r.comp.push_back(std::move(c));
  }
  return r;
}

}  // namespace ncx
