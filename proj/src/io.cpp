#include "ncx/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ncx {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw input_error(where + (where.back() == ':' ? " " : ": ") + msg);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int as_int(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    try {
      size_t pos = 0;
      int v = std::stoi(j.get<std::string>(), &pos);
      if (pos == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  fail(where, "expected an integer");
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Q as_q(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Q(j.get<long>());
  try {
    return parse_q(as_string(j, where));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

C as_c(const json& j, const std::string& where) {
  if (j.is_number_integer()) return C(Q(j.get<long>()));
  try {
    return parse_c(as_string(j, where));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, size_t i) { return where + "/" + std::to_string(i); }

int group_index(const FiniteGroup& G, const json& j, const std::string& where) {
  if (j.is_string())
    for (int g = 0; g < G.order; ++g)
      if (G.name(g) == j.get<std::string>()) return g;
  int g = as_int(j, where);
  if (g < 0 || g >= G.order) fail(where, "group element out of range");
  return g;
}

}  // namespace

json load_json(const std::string& path) {
  std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(path + ":" + line_col(text, e.byte) + ": malformed JSON");
  }
}

// ---- scenarios ----

Scenario scenario_from_json(const json& j, const std::string& where) {
  Scenario s;
  if (j.contains("name")) s.name = as_string(j["name"], at(where, "name"));
  const json& g = field(j, "group", where);
  std::string gw = at(where, "group");
  int order = as_int(field(g, "order", gw), at(gw, "order"));
  const json& mul = field(g, "mul", gw);
  if (!mul.is_array()) fail(at(gw, "mul"), "expected a table");
  std::vector<int> table;
  for (size_t r = 0; r < mul.size(); ++r) {
    if (mul[r].is_array()) {
      for (size_t c = 0; c < mul[r].size(); ++c) table.push_back(as_int(mul[r][c], at(at(gw, "mul"), r) + "/" + std::to_string(c)));
    } else {
      table.push_back(as_int(mul[r], at(at(gw, "mul"), r)));
    }
  }
  std::vector<std::string> names;
  if (g.contains("names"))
    for (size_t k = 0; k < g["names"].size(); ++k) names.push_back(as_string(g["names"][k], at(at(gw, "names"), k)));
  try {
    s.G = FiniteGroup::from_table(order, table, names);
  } catch (const structure_error& e) {
    fail(gw, e.what());
  }
  const json& act = field(j, "action", where);
  if (!act.is_array() || (int)act.size() != order) fail(at(where, "action"), "expected one row per group element");
  int np = act.empty() ? 0 : (int)act[0].size();
  std::vector<int> t;
  for (size_t r = 0; r < act.size(); ++r) {
    if (!act[r].is_array() || (int)act[r].size() != np) fail(at(at(where, "action"), r), "rows must have equal length");
    for (size_t c = 0; c < act[r].size(); ++c) t.push_back(as_int(act[r][c], at(at(where, "action"), r) + "/" + std::to_string(c)));
  }
  try {
    s.X = GAction::make(s.G, np, t);
  } catch (const structure_error& e) {
    fail(at(where, "action"), e.what());
  }
  s.k = ConformalCocycle::trivial(s.G, s.X);
  if (j.contains("cocycle")) {
    std::string cw = at(where, "cocycle");
    for (auto& [key, row] : j["cocycle"].items()) {
      int p = group_index(s.G, json(key), at(cw, key));
      if (!row.is_array() || (int)row.size() != np) fail(at(cw, key), "expected one value per point");
      for (int x = 0; x < np; ++x) s.k.k[p][x] = as_q(row[x], at(at(cw, key), x));
    }
    try {
      s.k.validate(s.G, s.X);
    } catch (const validation_error& e) {
      fail(cw, e.what());
    }
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  json mul = json::array();
  for (int a = 0; a < s.G.order; ++a) {
    json row = json::array();
    for (int b = 0; b < s.G.order; ++b) row.push_back(s.G(a, b));
    mul.push_back(row);
  }
  j["group"] = {{"order", s.G.order}, {"mul", mul}, {"names", s.G.names}};
  json act = json::array();
  for (int g = 0; g < s.G.order; ++g) {
    json row = json::array();
    for (int x = 0; x < s.X.npoints; ++x) row.push_back(s.X(g, x));
    act.push_back(row);
  }
  j["action"] = act;
  bool trivial = true;
  for (auto& row : s.k.k)
    for (auto& v : row) trivial = trivial && v == 1;
  if (!trivial) {
    json c;
    for (int g = 0; g < s.G.order; ++g) {
      json row = json::array();
      for (auto& v : s.k.k[g]) row.push_back(q_plain(v));
      c[s.G.name(g)] = row;
    }
    j["cocycle"] = c;
  }
  return j;
}

Scenario load_scenario(const std::string& path) {
  Scenario s = scenario_from_json(load_json(path), path + ":");
  if (s.name.empty()) s.name = std::filesystem::path(path).stem().string();
  return s;
}

// ---- matrices and elements ----

Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a matrix (array of rows)");
  int r = (int)j.size(), c = r ? (int)j[0].size() : 0;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || (int)j[i].size() != c) fail(at(where, i), "rows must have equal length");
    for (int k = 0; k < c; ++k) m(i, k) = as_c(j[i][k], at(where, i) + "/" + std::to_string(k));
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json j = json::array();
  for (int i = 0; i < m.r; ++i) {
    json row = json::array();
    for (int k = 0; k < m.c; ++k) row.push_back(c_str(m(i, k)));
    j.push_back(row);
  }
  return j;
}

Element element_from_json(const json& j, int dim, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an element {basis index: scalar}");
  Element e;
  for (auto& [key, v] : j.items()) {
    int i = as_int(json(key), at(where, key));
    if (i < 0 || i >= dim) fail(at(where, key), "basis index out of range");
    e.add(i, as_c(v, at(where, key)));
  }
  return e;
}

json element_to_json(const Element& e) {
  json j = json::object();
  for (auto& [i, v] : e.c) j[std::to_string(i)] = c_str(v);
  return j;
}

// ---- triples ----

TripleInput triple_from_json(const json& j, const std::string& where, const std::string& base_dir) {
  TripleInput in;
  const json& sj = field(j, "scenario", where);
  if (sj.is_string()) {
    std::filesystem::path p = std::filesystem::path(base_dir) / sj.get<std::string>();
    in.scenario = load_scenario(p.string());
  } else {
    in.scenario = scenario_from_json(sj, at(where, "scenario"));
  }
  CrossedProduct cp = crossed_product(in.scenario);
  TwistedTriple& t = in.triple;
  t.name = j.contains("name") ? as_string(j["name"], at(where, "name")) : in.scenario.name;
  t.alg = cp.alg;
  if (j.contains("grading")) {
    for (size_t k = 0; k < j["grading"].size(); ++k) {
      int g = as_int(j["grading"][k], at(at(where, "grading"), k));
      if (g != 1 && g != -1) fail(at(at(where, "grading"), k), "grading entries are +1 or -1");
      t.grading.push_back(g);
    }
  } else {
    int p = as_int(field(j, "dim_plus", where), at(where, "dim_plus"));
    int m = as_int(field(j, "dim_minus", where), at(where, "dim_minus"));
    t.grading.assign(p, 1);
    t.grading.insert(t.grading.end(), m, -1);
  }
  const json& rep = field(j, "rep", where);
  if (!rep.is_array() || (int)rep.size() != cp.alg.dim) fail(at(where, "rep"), "expected one matrix per basis element");
  for (size_t i = 0; i < rep.size(); ++i) t.rep.push_back(matrix_from_json(rep[i], at(at(where, "rep"), i)));
  t.D = matrix_from_json(field(j, "D", where), at(where, "D"));
  const json& sg = field(j, "sigma", where);
  std::string sw = at(where, "sigma");
  try {
    if (sg == "identity") {
      t.sigma = LinearMap::identity(cp.alg.dim);
    } else if (sg == "cocycle") {
      t.sigma = cp.sigma_from_cocycle(in.scenario.k);
    } else if (sg.is_object() && sg.contains("diagonal")) {
      std::vector<C> d;
      for (size_t k = 0; k < sg["diagonal"].size(); ++k) d.push_back(as_c(sg["diagonal"][k], at(at(sw, "diagonal"), k)));
      if ((int)d.size() != cp.alg.dim) fail(sw, "diagonal needs one entry per basis element");
      t.sigma = LinearMap::diagonal(d);
    } else if (sg.is_object() && sg.contains("images")) {
      for (size_t k = 0; k < sg["images"].size(); ++k)
        t.sigma.img.push_back(element_from_json(sg["images"][k], cp.alg.dim, at(at(sw, "images"), k)));
      if ((int)t.sigma.img.size() != cp.alg.dim) fail(sw, "images needs one entry per basis element");
    } else {
      fail(sw, "expected \"identity\", \"cocycle\", {\"diagonal\"} or {\"images\"}");
    }
    validate(t);
  } catch (const validation_error& e) {
    fail(where, e.what());
  } catch (const std::domain_error& e) {
    fail(where, e.what());
  }
  if (j.contains("idempotents")) {
    const json& ids = j["idempotents"];
    for (size_t k = 0; k < ids.size(); ++k) {
      std::string iw = at(at(where, "idempotents"), k);
      NamedIdempotent ni;
      ni.name = as_string(field(ids[k], "name", iw), at(iw, "name"));
      Element p = element_from_json(field(ids[k], "p", iw), cp.alg.dim, at(iw, "p"));
      if (ids[k].contains("a") || ids[k].contains("b")) {
        Element a = element_from_json(field(ids[k], "a", iw), cp.alg.dim, at(iw, "a"));
        Element b = element_from_json(field(ids[k], "b", iw), cp.alg.dim, at(iw, "b"));
        ni.e = conjugated_projection(cp.alg, a, b, p);
      } else {
        ni.e = scalar_amatrix(p);
      }
      try {
        check_idempotent(cp.alg, ni.e);
      } catch (const validation_error& e) {
        fail(iw, e.what());
      }
      if (ids[k].contains("expect")) ni.expect = as_q(ids[k]["expect"], at(iw, "expect"));
      in.idempotents.push_back(std::move(ni));
    }
  }
  return in;
}

TripleInput load_triple(const std::string& path) {
  auto dir = std::filesystem::path(path).parent_path().string();
  return triple_from_json(load_json(path), path + ":", dir.empty() ? "." : dir);
}

// ---- geometries ----

double parse_real(const std::string& s) {
  Expr e = parse_function(s, {});
  if (e->kind != ExprNode::Const) throw parse_error("expected a constant, got '" + s + "'");
  return e->value;
}

namespace {

double real_field(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  try {
    return parse_real(as_string(j, where));
  } catch (const parse_error& e) {
    fail(where, e.what());
  }
}

FactorMotion motion_from_json(const json& j, const std::string& factor, const std::string& where) {
  FactorMotion m;
  if (factor == "S2") {
    if (j.contains("translation")) fail(where, "a sphere factor takes a rotation");
    if (j.contains("rotation")) m.rotation = real_field(j["rotation"], at(where, "rotation"));
  } else {
    if (j.contains("rotation")) fail(where, "a torus factor takes a translation");
    if (j.contains("translation")) {
      const json& t = j["translation"];
      if (!t.is_array() || t.size() != 2) fail(at(where, "translation"), "expected two components");
      m.shift[0] = real_field(t[0], at(at(where, "translation"), 0));
      m.shift[1] = real_field(t[1], at(at(where, "translation"), 1));
    }
  }
  return m;
}

}  // namespace

GeometryInput geometry_from_json(const json& j, const std::string& where) {
  GeometryInput in;
  std::string name = j.contains("name") ? as_string(j["name"], at(where, "name")) : "geometry";
  std::string manifold = as_string(field(j, "manifold", where), at(where, "manifold"));
  std::vector<std::string> factors;
  {
    std::stringstream ss(manifold);
    std::string f;
    while (std::getline(ss, f, 'x'))
      if (!f.empty()) factors.push_back(f);
  }
  for (auto& f : factors)
    if (f != "S2" && f != "T2") fail(at(where, "manifold"), "unknown factor '" + f + "' (expected S2, T2 products)");
  if (factors.empty() || factors.size() > 2) fail(at(where, "manifold"), "expected one or two factors");
  std::vector<double> params;
  if (j.contains("params")) {
    const json& p = j["params"];
    if (p.is_object()) {
      for (auto& [key, v] : p.items()) params.push_back(real_field(v, at(at(where, "params"), key)));
    } else {
      for (size_t k = 0; k < p.size(); ++k) params.push_back(real_field(p[k], at(at(where, "params"), k)));
    }
  }
  const json& grp = field(j, "group", where);
  if (!grp.is_array() || grp.empty()) fail(at(where, "group"), "expected a non-empty list of isometries");
  std::vector<std::string> names;
  std::vector<std::vector<FactorMotion>> motions;
  for (size_t e = 0; e < grp.size(); ++e) {
    std::string ew = at(at(where, "group"), e);
    names.push_back(as_string(field(grp[e], "name", ew), at(ew, "name")));
    std::vector<FactorMotion> mv;
    if (grp[e].contains("factors")) {
      const json& fs = grp[e]["factors"];
      if (!fs.is_array() || fs.size() != factors.size()) fail(at(ew, "factors"), "expected one motion per factor");
      for (size_t f = 0; f < factors.size(); ++f) mv.push_back(motion_from_json(fs[f], factors[f], at(at(ew, "factors"), f)));
    } else {
      if (factors.size() != 1 && (grp[e].contains("rotation") || grp[e].contains("translation")))
        fail(ew, "product manifolds take per-factor motions under \"factors\"");
      for (auto& f : factors) mv.push_back(motion_from_json(grp[e], f, ew));
    }
    motions.push_back(mv);
  }
  try {
    in.gs = make_product_geometry(name, manifold, factors, params, names, motions);
  } catch (const geometry_error& e) {
    fail(where, e.what());
  }
  // closure of the listed isometries
  for (size_t a = 0; a < in.gs.group.size(); ++a)
    for (size_t b = 0; b < in.gs.group.size(); ++b)
      if (!group_element(in.gs, compose(in.gs.group[a].map, in.gs.group[b].map)))
        fail(at(where, "group"), "isometries do not form a group (" + names[a] + " " + names[b] + ")");
  if (!group_element(in.gs, AffineMap::identity(in.gs.n()))) fail(at(where, "group"), "group has no identity");
  if (j.contains("phi")) {
    in.phi = as_string(j["phi"], at(where, "phi"));
    try {
      in.gs.find(in.phi);
    } catch (const geometry_error& e) {
      fail(at(where, "phi"), e.what());
    }
  }
  in.omega_text = j.contains("omega") ? as_string(j["omega"], at(where, "omega")) : "1";
  try {
    in.omega = parse_form(in.omega_text, in.gs.chart.coords);
  } catch (const parse_error& e) {
    fail(at(where, "omega"), e.what());
  }
  if (j.contains("quadrature")) {
    in.N = as_int(field(j["quadrature"], "N", at(where, "quadrature")), at(at(where, "quadrature"), "N"));
    if (in.N < 2) fail(at(at(where, "quadrature"), "N"), "need at least 2 nodes per dimension");
  }
  if (j.contains("pairings")) {
    const json& ps = j["pairings"];
    for (size_t k = 0; k < ps.size(); ++k) {
      std::string pw = at(at(where, "pairings"), k);
      PairSpec p;
      p.name = as_string(field(ps[k], "name", pw), at(pw, "name"));
      p.q = as_int(field(ps[k], "q", pw), at(pw, "q"));
      const json& fs = field(ps[k], "f", pw);
      for (size_t i = 0; i < fs.size(); ++i) {
        p.f.push_back(as_string(fs[i], at(at(pw, "f"), i)));
        try {
          parse_function(p.f.back(), in.gs.chart.coords);
        } catch (const parse_error& e) {
          fail(at(at(pw, "f"), i), e.what());
        }
      }
      if ((int)p.f.size() != 2 * p.q + 1) fail(at(pw, "f"), "a 2q-cochain takes 2q+1 functions");
      if (ps[k].contains("g")) {
        for (size_t i = 0; i < ps[k]["g"].size(); ++i) p.g.push_back(as_string(ps[k]["g"][i], at(at(pw, "g"), i)));
        if (p.g.size() != p.f.size()) fail(at(pw, "g"), "one group element per function");
      } else {
        p.g.assign(p.f.size(), in.gs.group[*group_element(in.gs, AffineMap::identity(in.gs.n()))].name);
      }
      for (size_t i = 0; i < p.g.size(); ++i) {
        try {
          in.gs.find(p.g[i]);
        } catch (const geometry_error& e) {
          fail(at(at(pw, "g"), i), e.what());
        }
      }
      if (ps[k].contains("expect")) {
        const json& ex = ps[k]["expect"];
        if (!ex.is_array() || ex.size() != 2) fail(at(pw, "expect"), "expected [re, im]");
        p.expect = cplx(real_field(ex[0], at(at(pw, "expect"), 0)), real_field(ex[1], at(at(pw, "expect"), 1)));
      }
      in.pairings.push_back(p);
    }
  }
  return in;
}

GeometryInput load_geometry(const std::string& path) { return geometry_from_json(load_json(path), path + ":"); }

// ---- reports ----

std::string fmt_real(double v) {
  if (v == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json fmt_cplx(cplx z) { return {{"re", fmt_real(z.real())}, {"im", fmt_real(z.imag())}}; }

namespace {

void pretty(const json& j, int indent, std::string& out) {
  // scalar arrays and small scalar objects stay on one line
  bool leaves = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
  bool flat = !j.is_structured() || j.empty() || (leaves && (j.is_array() || j.size() <= 3));
  if (flat) {
    out += j.dump();
    return;
  }
  std::string pad(indent + 2, ' ');
  out += j.is_array() ? "[\n" : "{\n";
  size_t k = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++k) {
    out += pad;
    if (j.is_object()) out += json(it.key()).dump() + ": ";
    pretty(*it, indent + 2, out);
    out += k + 1 < j.size() ? ",\n" : "\n";
  }
  out += std::string(indent, ' ') + (j.is_array() ? "]" : "}");
}

}  // namespace

std::string dump_report(const json& j) {
  std::string out;
  pretty(j, 0, out);
  return out + "\n";
}

json homology_to_json(const HomologyReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["flavor"] = flavor_name(r.flavor);
  j["parity"] = std::to_string(r.parity);
  j["q_max"] = std::to_string(r.q_max);
  json blocks = json::array();
  for (auto& b : r.blocks)
    blocks.push_back({{"class", b.name},
                      {"computed", std::to_string(b.computed)},
                      {"computed_next", std::to_string(b.computed_next)},
                      {"predicted", std::to_string(b.predicted)},
                      {"stable", b.stable},
                      {"squares_to_zero", b.squares_to_zero}});
  j["blocks"] = blocks;
  j["total_computed"] = std::to_string(r.total_computed);
  j["total_predicted"] = std::to_string(r.total_predicted);
  return j;
}

}  // namespace ncx
