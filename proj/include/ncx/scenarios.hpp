#pragma once

#include "ncx/group.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace ncx {

// group of permutations given as images, composed as (g h)(x) = g(h(x)); acts on points naturally
inline Scenario permutation_scenario(const std::string& name, const std::vector<std::vector<int>>& perms,
                                     const std::vector<std::string>& names) {
  int n = (int)perms.size();
  int np = perms.empty() ? 0 : (int)perms[0].size();
  std::vector<int> table(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> comp(np);
      for (int x = 0; x < np; ++x) comp[x] = perms[a][perms[b][x]];
      auto it = std::find(perms.begin(), perms.end(), comp);
      if (it == perms.end()) throw structure_error("permutation set is not closed");
      table[a * n + b] = (int)(it - perms.begin());
    }
  Scenario s;
  s.name = name;
  s.G = FiniteGroup::from_table(n, table, names);
  std::vector<int> act(n * np);
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < np; ++x) act[g * np + x] = perms[g][x];
  s.X = GAction::make(s.G, np, act);
  s.k = ConformalCocycle::trivial(s.G, s.X);
  return s;
}

inline Scenario scenario_z2swap() { return permutation_scenario("z2swap", {{0, 1}, {1, 0}}, {"id", "s"}); }

inline Scenario scenario_z2trivial() {
  Scenario s;
  s.name = "z2trivial";
  s.G = FiniteGroup::from_table(2, {0, 1, 1, 0}, {"id", "s"});
  s.X = GAction::make(s.G, 1, {0, 0});
  s.k = ConformalCocycle::trivial(s.G, s.X);
  return s;
}

inline Scenario scenario_z3rot() {
  return permutation_scenario("z3rot", {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {"id", "r", "r2"});
}

inline Scenario scenario_s3() {
  return permutation_scenario("s3", {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}},
                              {"id", "(12)", "(13)", "(23)", "(123)", "(132)"});
}

inline Scenario scenario_v4() {
  return permutation_scenario("v4", {{0, 1, 2, 3}, {1, 0, 2, 3}, {0, 1, 3, 2}, {1, 0, 3, 2}}, {"id", "a", "b", "ab"});
}

inline std::vector<Scenario> default_suite() {
  return {scenario_z2swap(), scenario_z2trivial(), scenario_z3rot(), scenario_s3(), scenario_v4()};
}

}  // namespace ncx
