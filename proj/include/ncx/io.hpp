#pragma once

#include "ncx/geometry.hpp"
#include "ncx/homology.hpp"
#include "ncx/spectral.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncx {

using json = nlohmann::json;

// malformed input, message carries the location ("file:line:col" or "file: /json/pointer")
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path);

// scenarios: {"name"?, "group": {"order", "mul", "names"?}, "action", "cocycle"?}
Scenario scenario_from_json(const json& j, const std::string& where);
json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

Matrix matrix_from_json(const json& j, const std::string& where);
json matrix_to_json(const Matrix& m);
Element element_from_json(const json& j, int dim, const std::string& where);
json element_to_json(const Element& e);

struct NamedIdempotent {
  std::string name;
  AMatrix e;
  std::optional<Q> expect;
};

struct TripleInput {
  Scenario scenario;
  TwistedTriple triple;
  std::vector<NamedIdempotent> idempotents;
};

// triples: {"name", "scenario": object | relative path, "grading" | "dim_plus"/"dim_minus",
//           "rep": [matrix per basis element], "D", "sigma": "identity" | "cocycle" | {"diagonal"} | {"images"},
//           "idempotents"?: [{"name", "p", "a"?, "b"?, "expect"?}]}
TripleInput triple_from_json(const json& j, const std::string& where, const std::string& base_dir = ".");
TripleInput load_triple(const std::string& path);

struct PairSpec {
  std::string name;
  int q = 0;
  std::vector<std::string> f, g;
  std::optional<cplx> expect;
};

struct GeometryInput {
  GeometryScenario gs;
  std::string phi = "id";
  std::string omega_text;
  FormExpr omega;
  int N = 64;
  std::vector<PairSpec> pairings;
};

// geometries: {"name", "manifold": "T2" | "S2" | "T2xT2" | "S2xT2", "params"?, "group": [descriptor],
//              "phi", "omega", "quadrature": {"N"}, "pairings"?}
GeometryInput geometry_from_json(const json& j, const std::string& where);
GeometryInput load_geometry(const std::string& path);

double parse_real(const std::string& s);

// ---- reports: canonical key order, numbers as strings ----

std::string fmt_real(double v);
json fmt_cplx(cplx z);
std::string dump_report(const json& j);
json homology_to_json(const HomologyReport& r);

}  // namespace ncx
