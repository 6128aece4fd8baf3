#pragma once

#include "ncx/gnormal.hpp"
#include "ncx/rank.hpp"

#include <map>
#include <string>
#include <vector>

namespace ncx {

enum class Flavor { full, gnormalized, twisted };

inline const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::full: return "full";
    case Flavor::gnormalized: return "g-normalized";
    case Flavor::twisted: return "twisted";
  }
  return "?";
}

struct size_cap_error : std::length_error {
  using std::length_error::length_error;
};

// One conjugacy block of a chain model: basis per degree and the two operators.
struct BlockModel {
  std::function<std::vector<Tuple>(int)> basis;
  std::function<Chain(const Tuple&)> lift;
  std::function<Chain(const Chain&)> b, B, reduce;
  std::function<double(int)> estimate;
};

struct EngineConfig {
  int threads = 1;
  double cap = 1.5e5;  // max basis size per degree and block
};

inline BlockModel full_model(const CrossedProduct& cp, const ConjugacyData& cd, int block) {
  BlockModel M;
  const CrossedProduct* p = &cp;
  const ConjugacyData* c = &cd;
  int d = cp.alg.dim;
  M.estimate = [d](int k) {
    double n = d;
    for (int j = 0; j < k; ++j) n *= (d - 1);
    return n;
  };
  M.basis = [p, c, block](int k) {
    std::vector<Tuple> out;
    int piv = p->alg.unit.front();
    for_each_tuple(p->alg.dim, k, [&](const Tuple& t) {
      for (int j = 1; j <= k; ++j)
        if (t[j] == piv) return;
      if (tuple_block(*p, *c, t) == block) out.push_back(t);
    });
    return out;
  };
  M.lift = [](const Tuple& t) { return Chain::basis(t); };
  M.b = [p](const Chain& x) { return hochschild_b(p->alg, x); };
  M.B = [p](const Chain& x) { return connes_B(p->alg, x); };
  M.reduce = [p](const Chain& x) { return normalize(p->alg, x); };
  return M;
}

inline BlockModel gnormalized_model(const CrossedProduct& cp, const ConjugacyData& cd, int block) {
  BlockModel M;
  const CrossedProduct* p = &cp;
  const ConjugacyData* c = &cd;
  int n = cp.X.npoints, o = cp.G.order;
  M.estimate = [n, o](int k) {
    double s = o;
    for (int j = 0; j <= k; ++j) s *= n;
    return s;
  };
  M.basis = [p, c, block](int k) {
    std::vector<Tuple> out;
    int npts = p->X.npoints;
    if (npts == 0) return out;
    std::vector<int> x(k + 1, 0);
    while (true) {
      for (int phi : c->classes[block]) {
        Tuple t(k + 1);
        for (int j = 0; j < k; ++j) t[j] = p->index(x[j], p->G.id);
        t[k] = p->index(x[k], phi);
        if (canonical_tuple(*p, t) == t) out.push_back(t);
      }
      int j = k;
      while (j >= 0 && ++x[j] == npts) x[j--] = 0;
      if (j < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  M.lift = [](const Tuple& t) { return Chain::basis(t); };
  M.b = [p](const Chain& x) { return hochschild_b(p->alg, x); };
  M.B = [p](const Chain& x) { return connes_B(p->alg, x); };
  M.reduce = [p](const Chain& x) { return g_normalize(*p, x); };
  return M;
}

inline Tuple point_orbit_min(const GAction& X, const std::vector<int>& H, const Tuple& t) {
  Tuple best = t, u(t.size());
  for (int h : H) {
    for (size_t j = 0; j < t.size(); ++j) u[j] = X(h, t[j]);
    if (u < best) best = u;
  }
  return best;
}

// twisted complex of C(X) by phi restricted to G_phi-invariant chains (orbit-sum basis)
inline BlockModel twisted_model(const CrossedProduct& cp, const ConjugacyData& cd, int phi) {
  BlockModel M;
  const FiniteGroup* G = &cp.G;
  const GAction* X = &cp.X;
  std::vector<int> H = cd.stabilizer[phi];
  int n = cp.X.npoints;
  M.estimate = [n](int k) {
    double s = 1;
    for (int j = 0; j <= k; ++j) s *= n;
    return s;
  };
  M.basis = [X, H](int k) {
    std::vector<Tuple> out;
    for_each_tuple(X->npoints, k, [&](const Tuple& t) {
      if (point_orbit_min(*X, H, t) == t) out.push_back(t);
    });
    return out;
  };
  M.lift = [X, H](const Tuple& t) {
    Chain c((int)t.size() - 1);
    std::set<Tuple> orb;
    Tuple u(t.size());
    for (int h : H) {
      for (size_t j = 0; j < t.size(); ++j) u[j] = (*X)(h, t[j]);
      orb.insert(u);
    }
    for (auto& v : orb) c.add(v, C(1));
    return c;
  };
  M.b = [G, X, phi](const Chain& x) { return twisted_b(*G, *X, phi, x); };
  M.B = [G, X, phi](const Chain& x) { return twisted_B(*G, *X, phi, x); };
  M.reduce = [](const Chain& x) { return x; };
  return M;
}

struct BlockComplex {
  std::vector<int> dims;  // dims[k] = dim C_k, k = 0..N+1
  int N = 0;
  // columns of d_N : Tot_N -> Tot_{N-1} and d_{N+1} : Tot_{N+1} -> Tot_N
  std::vector<SparseVec<Q>> dN, dN1;
  int rows_N = 0, rows_N1 = 0;  // dim Tot_{N-1}, dim Tot_N
  bool squares_to_zero = false;
};

namespace detail {

// offsets of C_k inside Tot_n
inline std::map<int, int> tot_offsets(const std::vector<int>& dims, int n, int& total) {
  std::map<int, int> off;
  total = 0;
  for (int k = n; k >= 0; k -= 2) {
    off[k] = total;
    total += dims[k];
  }
  return off;
}

inline SparseVec<Q> to_sparse(const std::map<int, Q>& m) {
  SparseVec<Q> v;
  for (auto& [r, x] : m)
    if (sgn(x) != 0) v.push_back({r, x});
  return v;
}

}  // namespace detail

// Assembles d_N and d_{N+1} of the truncated total complex for one block.
inline BlockComplex assemble_block(const BlockModel& M, int N, const EngineConfig& cfg) {
  BlockComplex bc;
  bc.N = N;
  std::vector<std::vector<Tuple>> basis(N + 2);
  std::vector<std::map<Tuple, int>> index(N + 2);
  for (int k = 0; k <= N + 1; ++k) {
    double est = M.estimate(k);
    if (est > cfg.cap)
      throw size_cap_error("chain space of degree " + std::to_string(k) + " has estimated dimension " +
                           std::to_string((long long)est) + " above the cap " + std::to_string((long long)cfg.cap));
    basis[k] = M.basis(k);
    for (size_t i = 0; i < basis[k].size(); ++i) index[k][basis[k][i]] = (int)i;
    bc.dims.push_back((int)basis[k].size());
  }

  auto coords = [&](int k, const Chain& x, int offset, std::map<int, Q>& out) {
    Chain r = M.reduce(x);
    for (auto& [t, v] : r.terms) {
      auto it = index[k].find(t);
      if (it == index[k].end()) continue;  // non-representative orbit member (twisted model)
      if (sgn(v.im) != 0) throw std::logic_error("non-rational boundary coefficient");
      out[offset + it->second] += v.re;
    }
  };

  auto build = [&](int n, std::vector<SparseVec<Q>>& cols, int& nrows) {
    int ncols = 0;
    auto in_off = detail::tot_offsets(bc.dims, n, ncols);
    auto out_off = detail::tot_offsets(bc.dims, n - 1, nrows);
    std::vector<std::pair<int, int>> jobs;  // (degree, basis index) in column order
    for (int k = n; k >= 0; k -= 2)
      for (int i = 0; i < bc.dims[k]; ++i) jobs.push_back({k, i});
    cols.assign(jobs.size(), {});
    parallel_for((int)jobs.size(), cfg.threads, [&](int j) {
      auto [k, i] = jobs[j];
      Chain x = M.lift(basis[k][i]);
      std::map<int, Q> col;
      if (k >= 1 && n - 1 >= 0) coords(k - 1, M.b(x), out_off.at(k - 1), col);
      if (k + 1 <= n - 1) coords(k + 1, M.B(x), out_off.at(k + 1), col);
      cols[j] = detail::to_sparse(col);
    });
  };

  if (N >= 1) build(N, bc.dN, bc.rows_N);
  build(N + 1, bc.dN1, bc.rows_N1);

  // d_N d_{N+1} = 0
  bc.squares_to_zero = true;
  if (N >= 1) {
    for (auto& col : bc.dN1) {
      std::map<int, Q> acc;
      for (auto& [r, v] : col)
        for (auto& [r2, w] : bc.dN[r]) acc[r2] += v * w;
      for (auto& kv : acc)
        if (sgn(kv.second) != 0) bc.squares_to_zero = false;
      if (!bc.squares_to_zero) break;
    }
  }
  return bc;
}

inline int tot_dim(const std::vector<int>& dims, int n) {
  int s = 0;
  for (int k = n; k >= 0; k -= 2) s += dims[k];
  return s;
}

// dim of the truncated periodic homology in degree N = 2 q_max + parity
inline int block_homology(const BlockComplex& bc) {
  int rN = bc.N >= 1 ? sparse_rank(bc.dN, bc.rows_N) : 0;
  int rN1 = sparse_rank(bc.dN1, bc.rows_N1);
  return tot_dim(bc.dims, bc.N) - rN - rN1;
}

struct BlockResult {
  int cls = 0;
  std::string name;
  int computed = 0, computed_next = 0, predicted = 0;
  bool stable = false, squares_to_zero = false;
};

struct HomologyReport {
  std::string scenario;
  Flavor flavor = Flavor::full;
  int parity = 0, q_max = 1;
  std::vector<BlockResult> blocks;
  int total_computed = 0, total_predicted = 0;
  bool stable = true, squares_to_zero = true;
};

// predicted dims: number of G_phi-orbits on X^phi for parity 0, zero for parity 1
inline std::vector<int> bn_predict(const Scenario& s, int parity) {
  auto cd = conjugacy_analysis(s.G, s.X);
  std::vector<int> out;
  for (size_t c = 0; c < cd.classes.size(); ++c) {
    int phi = cd.representative((int)c);
    out.push_back(parity == 1 ? 0 : (int)orbits(s.X, cd.stabilizer[phi], cd.fixed[phi]).size());
  }
  return out;
}

inline std::string class_name(const FiniteGroup& G, const std::vector<int>& cls) {
  std::string s = "<" + G.name(cls.front()) + ">";
  return s;
}

inline BlockModel make_model(const CrossedProduct& cp, const ConjugacyData& cd, Flavor f, int cls) {
  switch (f) {
    case Flavor::full: return full_model(cp, cd, cls);
    case Flavor::gnormalized: return gnormalized_model(cp, cd, cls);
    case Flavor::twisted: return twisted_model(cp, cd, cd.representative(cls));
  }
  throw std::logic_error("unknown flavor");
}

inline HomologyReport compute_hp(const Scenario& s, Flavor f, int parity, int q_max, const EngineConfig& cfg) {
  if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
  if (q_max < 0) throw std::invalid_argument("q_max must be non-negative");
  HomologyReport rep;
  rep.scenario = s.name;
  rep.flavor = f;
  rep.parity = parity;
  rep.q_max = q_max;
  CrossedProduct cp = crossed_product(s);
  auto cd = conjugacy_analysis(s.G, s.X);
  auto pred = bn_predict(s, parity);
  int nb = (int)cd.classes.size();
  rep.blocks.resize(nb);
  if (s.X.npoints == 0) {
    for (int c = 0; c < nb; ++c) {
      rep.blocks[c] = {c, class_name(s.G, cd.classes[c]), 0, 0, 0, true, true};
    }
    return rep;
  }
  // size check up front so no partial work is done
  for (int c = 0; c < nb; ++c) {
    auto M = make_model(cp, cd, f, c);
    int top = 2 * (q_max + 1) + parity + 1;
    for (int k = 0; k <= top; ++k)
      if (M.estimate(k) > cfg.cap)
        throw size_cap_error(std::string(flavor_name(f)) + " chain space of degree " + std::to_string(k) +
                             " has estimated dimension " + std::to_string((long long)M.estimate(k)) +
                             " above the cap " + std::to_string((long long)cfg.cap));
  }
  // blocks run sequentially; columns inside a block use the thread pool
  for (int c = 0; c < nb; ++c) {
    auto M = make_model(cp, cd, f, c);
    BlockResult br;
    br.cls = c;
    br.name = class_name(s.G, cd.classes[c]);
    auto b0 = assemble_block(M, 2 * q_max + parity, cfg);
    auto b1 = assemble_block(M, 2 * (q_max + 1) + parity, cfg);
    br.computed = block_homology(b0);
    br.computed_next = block_homology(b1);
    br.predicted = pred[c];
    br.stable = br.computed == br.computed_next;
    br.squares_to_zero = b0.squares_to_zero && b1.squares_to_zero;
    rep.blocks[c] = br;
  }
  for (auto& b : rep.blocks) {
    rep.total_computed += b.computed;
    rep.total_predicted += b.predicted;
    rep.stable = rep.stable && b.stable;
    rep.squares_to_zero = rep.squares_to_zero && b.squares_to_zero;
  }
  return rep;
}

// dim HP_i per block, full versus G-normalized flavors
inline bool verify_pi_star(const Scenario& s, int parity, int q_max, const EngineConfig& cfg) {
  auto a = compute_hp(s, Flavor::full, parity, q_max, cfg);
  auto b = compute_hp(s, Flavor::gnormalized, parity, q_max, cfg);
  for (size_t c = 0; c < a.blocks.size(); ++c)
    if (a.blocks[c].computed != b.blocks[c].computed) return false;
  return true;
}

}  // namespace ncx
