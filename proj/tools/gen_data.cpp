// writes the shipped inputs under data/ from the in-code builders
#include "ncx/io.hpp"
#include "ncx/scenarios.hpp"
#include "ncx/triples.hpp"

#include <fstream>
#include <iostream>

using namespace ncx;

namespace {

void write(const std::string& dir, const std::string& name, const json& j) {
  std::ofstream f(dir + "/" + name, std::ios::binary);
  f << dump_report(j);
  std::cout << dir << "/" << name << "\n";
}

json triple_json(const TwistedTriple& t, const json& scenario, const json& sigma) {
  json rep = json::array();
  for (auto& m : t.rep) rep.push_back(matrix_to_json(m));
  return {{"name", t.name}, {"scenario", scenario}, {"dim_plus", t.dim_plus()}, {"dim_minus", t.dim_minus()},
          {"rep", rep},     {"D", matrix_to_json(t.D)}, {"sigma", sigma}};
}

json group_json(const std::vector<std::pair<std::string, json>>& elems) {
  json g = json::array();
  for (auto& [name, motion] : elems) {
    json e = motion.is_null() ? json::object() : motion;
    e["name"] = name;
    g.push_back(e);
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "data";
  for (auto& s : default_suite()) write(dir, s.name + ".json", scenario_to_json(s));

  write(dir, "micro.json", triple_json(triple_micro(), "z2trivial.json", {{"diagonal", {"1", "-1"}}}));

  {
    TwistedTriple t = triple_twisted3();
    json j = triple_json(t, scenario_to_json(scenario_twisted3()), "cocycle");
    // delta_0 u_id + delta_1 u_id conjugated by unipotents
    j["idempotents"] = {{{"name", "swap_pair"}, {"p", {{"0", "1"}, {"2", "1"}}}, {"a", {{"1", "1"}}}, {"b", {{"4", "2-i"}}}}};
    write(dir, "twisted3.json", j);
  }
  {
    TwistedTriple t = triple_asym();
    json j = triple_json(t, scenario_to_json(scenario_two_points()), "identity");
    j["idempotents"] = {{{"name", "delta1"}, {"p", {{"1", "1"}}}, {"expect", "1"}},
                        {{"name", "delta1_conjugated"},
                         {"p", {{"1", "1"}}},
                         {"a", {{"0", "2"}, {"1", "1/3"}}},
                         {"b", {{"0", "-1+i"}}},
                         {"expect", "1"}},
                        {{"name", "delta0"}, {"p", {{"0", "1"}}}, {"expect", "-1"}}};
    write(dir, "asym.json", j);
  }

  write(dir, "t2.json",
        {{"name", "t2"},
         {"manifold", "T2"},
         {"group", group_json({{"id", nullptr}, {"tx", {{"translation", {"pi", "0"}}}}})},
         {"phi", "id"},
         {"omega", "dx^dy"},
         {"quadrature", {{"N", 256}}},
         {"pairings",
          {{{"name", "transverse fundamental class"},
            {"q", 1},
            {"f", {"sin(x)*sin(y)", "cos(x)", "cos(y)"}},
            {"g", {"id", "id", "id"}},
            {"expect", {"0", "-pi/4"}}},
           {{"name", "shifted word"},
            {"q", 1},
            {"f", {"sin(x)*sin(y)", "cos(x)", "cos(y)"}},
            {"g", {"tx", "id", "id"}},
            {"expect", {"0", "0"}}}}}});

  {
    std::vector<std::pair<std::string, json>> rot;
    for (int k = 0; k < 12; ++k)
      rot.push_back({k ? "r" + std::to_string(k) : "id", k ? json{{"rotation", std::to_string(k) + "*pi/6"}} : json()});
    write(dir, "s2.json",
          {{"name", "s2"},
           {"manifold", "S2"},
           {"params", {{"radius", 1}}},
           {"group", group_json(rot)},
           {"phi", "id"},
           {"omega", "sin(theta)*dtheta^dphi"},
           {"quadrature", {{"N", 64}}}});
    write(dir, "s2_rotation.json",
          {{"name", "s2_rotation"},
           {"manifold", "S2"},
           {"params", {{"radius", 1}}},
           {"group", group_json(rot)},
           {"phi", "r4"},
           {"omega", "1"},
           {"quadrature", {{"N", 64}}}});
  }

  write(dir, "t2xt2.json",
        {{"name", "t2xt2"},
         {"manifold", "T2xT2"},
         {"group", group_json({{"id", nullptr},
                               {"t", {{"factors", {{{"translation", {"pi", "0"}}}, {{"translation", {"0", "0"}}}}}}}})},
         {"phi", "id"},
         {"omega", "dx1^dy1^dx2^dy2"},
         {"quadrature", {{"N", 8}}}});

  {
    std::vector<std::pair<std::string, json>> rot;
    for (int k = 0; k < 4; ++k)
      rot.push_back({k ? "r" + std::to_string(k) : "id",
                     {{"factors", {{{"rotation", std::to_string(k) + "*pi/2"}}, {{"translation", {"0", "0"}}}}}}});
    write(dir, "s2xt2.json",
          {{"name", "s2xt2"},
           {"manifold", "S2xT2"},
           {"params", {{"radius", 1}}},
           {"group", group_json(rot)},
           {"phi", "id"},
           {"omega", "sin(theta)*dtheta^dphi^dx^dy"},
           {"quadrature", {{"N", 8}}}});
  }
  return 0;
}
