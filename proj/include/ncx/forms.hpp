#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncx {

using cplx = std::complex<double>;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- scalar expression trees over chart coordinates ----

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum Kind { Const, Sin, Cos, Add, Mul } kind = Const;
  double value = 0;          // Const
  double freq = 0;           // Sin/Cos: freq * x_var + phase
  int var = 0;
  double phase = 0;
  std::vector<Expr> args;    // Add/Mul
};

inline Expr constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Const;
  n->value = v;
  return n;
}

inline Expr trig(bool is_sin, double freq, int var, double phase = 0) {
  auto n = std::make_shared<ExprNode>();
  n->kind = is_sin ? ExprNode::Sin : ExprNode::Cos;
  n->freq = freq;
  n->var = var;
  n->phase = phase;
  return n;
}

inline bool is_const(const Expr& e, double v) { return e->kind == ExprNode::Const && e->value == v; }

inline Expr operator+(const Expr& a, const Expr& b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (a->kind == ExprNode::Const && b->kind == ExprNode::Const) return constant(a->value + b->value);
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Add;
  n->args = {a, b};
  return n;
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (is_const(a, 0) || is_const(b, 0)) return constant(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  if (a->kind == ExprNode::Const && b->kind == ExprNode::Const) return constant(a->value * b->value);
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Mul;
  n->args = {a, b};
  return n;
}

inline Expr operator-(const Expr& a) { return constant(-1) * a; }
inline Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

inline double eval(const Expr& e, const double* x) {
  switch (e->kind) {
    case ExprNode::Const: return e->value;
    case ExprNode::Sin: return std::sin(e->freq * x[e->var] + e->phase);
    case ExprNode::Cos: return std::cos(e->freq * x[e->var] + e->phase);
    case ExprNode::Add: {
      double s = 0;
      for (auto& a : e->args) s += eval(a, x);
      return s;
    }
    case ExprNode::Mul: {
      double s = 1;
      for (auto& a : e->args) s *= eval(a, x);
      return s;
    }
  }
  return 0;
}

inline Expr derivative(const Expr& e, int var) {
  switch (e->kind) {
    case ExprNode::Const: return constant(0);
    case ExprNode::Sin:
      if (e->var != var || e->freq == 0) return constant(0);
      return constant(e->freq) * trig(false, e->freq, e->var, e->phase);
    case ExprNode::Cos:
      if (e->var != var || e->freq == 0) return constant(0);
      return constant(-e->freq) * trig(true, e->freq, e->var, e->phase);
    case ExprNode::Add: {
      Expr s = constant(0);
      for (auto& a : e->args) s = s + derivative(a, var);
      return s;
    }
    case ExprNode::Mul: {
      Expr s = constant(0);
      for (size_t i = 0; i < e->args.size(); ++i) {
        Expr t = derivative(e->args[i], var);
        for (size_t j = 0; j < e->args.size(); ++j)
          if (j != i) t = t * e->args[j];
        s = s + t;
      }
      return s;
    }
  }
  return constant(0);
}

// Chart-affine map: y_i = sign[i] * x_{perm[i]} + shift[i].
struct AffineMap {
  std::vector<int> perm, sign;
  std::vector<double> shift;

  static AffineMap identity(int n) {
    AffineMap m;
    for (int i = 0; i < n; ++i) {
      m.perm.push_back(i);
      m.sign.push_back(1);
      m.shift.push_back(0);
    }
    return m;
  }
  int dim() const { return (int)perm.size(); }
  void apply(const double* x, double* y) const {
    for (int i = 0; i < dim(); ++i) y[i] = sign[i] * x[perm[i]] + shift[i];
  }
};

// (a ∘ b)(x) = a(b(x))
inline AffineMap compose(const AffineMap& a, const AffineMap& b) {
  AffineMap m = a;
  for (int i = 0; i < a.dim(); ++i) {
    int j = a.perm[i];
    m.perm[i] = b.perm[j];
    m.sign[i] = a.sign[i] * b.sign[j];
    m.shift[i] = a.sign[i] * b.shift[j] + a.shift[i];
  }
  return m;
}

inline AffineMap inverse(const AffineMap& a) {
  AffineMap m = a;
  for (int i = 0; i < a.dim(); ++i) {
    int j = a.perm[i];
    m.perm[j] = i;
    m.sign[j] = a.sign[i];
    m.shift[j] = -a.sign[i] * a.shift[i];
  }
  return m;
}

// f ∘ m
inline Expr substitute(const Expr& e, const AffineMap& m) {
  switch (e->kind) {
    case ExprNode::Const: return e;
    case ExprNode::Sin:
    case ExprNode::Cos: {
      int v = e->var;
      return trig(e->kind == ExprNode::Sin, e->freq * m.sign[v], m.perm[v], e->freq * m.shift[v] + e->phase);
    }
    case ExprNode::Add:
    case ExprNode::Mul: {
      auto n = std::make_shared<ExprNode>(*e);
      for (auto& a : n->args) a = substitute(a, m);
      return n;
    }
  }
  return e;
}

// ---- differential forms ----

// numeric form at a point: coefficient of dx_I per bitmask I (n <= 4)
struct Form {
  int n = 0;
  std::array<cplx, 16> c{};

  Form() = default;
  explicit Form(int dim, cplx scalar = 0) : n(dim) { c[0] = scalar; }

  Form& operator+=(const Form& o) {
    for (int i = 0; i < 16; ++i) c[i] += o.c[i];
    return *this;
  }
  Form& operator-=(const Form& o) {
    for (int i = 0; i < 16; ++i) c[i] -= o.c[i];
    return *this;
  }
  Form& operator*=(cplx s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(cplx s, Form a) { return a *= s; }

  // part of exterior degree k
  Form degree_part(int k) const {
    Form f(n);
    for (int I = 0; I < 16; ++I)
      if (__builtin_popcount(I) == k) f.c[I] = c[I];
    return f;
  }
  double max_abs() const {
    double m = 0;
    for (auto& v : c) m = std::max(m, std::abs(v));
    return m;
  }
};

// sign of dx_I ∧ dx_J relative to dx_{I∪J}
inline int wedge_sign(int I, int J) {
  int s = 0;
  for (int j = 0; j < 4; ++j)
    if (J >> j & 1) s += __builtin_popcount(I >> (j + 1));
  return (s & 1) ? -1 : 1;
}

inline Form wedge(const Form& a, const Form& b) {
  Form r(a.n);
  for (int I = 0; I < 16; ++I) {
    if (a.c[I] == cplx(0)) continue;
    for (int J = 0; J < 16; ++J) {
      if ((I & J) || b.c[J] == cplx(0)) continue;
      r.c[I | J] += double(wedge_sign(I, J)) * a.c[I] * b.c[J];
    }
  }
  return r;
}

// exp of an even form with nilpotent positive-degree part
inline Form form_exp(const Form& f) {
  Form nil = f;
  cplx s = nil.c[0];
  nil.c[0] = 0;
  Form r(f.n, 1), term(f.n, 1);
  for (int k = 1; k <= f.n / 2; ++k) {
    term = wedge(term, nil);
    term *= 1.0 / k;
    r += term;
  }
  r *= std::exp(s);
  return r;
}

// inverse of a form with invertible scalar part
inline Form form_inverse(const Form& f) {
  cplx s = f.c[0];
  if (std::abs(s) < 1e-14) throw std::domain_error("form with vanishing scalar part is not invertible");
  Form nil = f;
  nil.c[0] = 0;
  nil *= -1.0 / s;
  Form r(f.n, 1), term(f.n, 1);
  for (int k = 1; k <= f.n; ++k) {
    term = wedge(term, nil);
    r += term;
  }
  r *= 1.0 / s;
  return r;
}

// symbolic form: coefficient expression per bitmask
struct FormExpr {
  int n = 0;
  std::map<int, Expr> terms;

  FormExpr() = default;
  explicit FormExpr(int dim) : n(dim) {}
  static FormExpr function(int dim, const Expr& f) {
    FormExpr w(dim);
    w.terms[0] = f;
    return w;
  }
  void add(int I, const Expr& e) {
    auto it = terms.find(I);
    terms[I] = it == terms.end() ? e : it->second + e;
  }
  int max_degree() const {
    int d = 0;
    for (auto& [I, e] : terms) d = std::max(d, __builtin_popcount(I));
    return d;
  }
  Form at(const double* x) const {
    Form f(n);
    for (auto& [I, e] : terms) f.c[I] = eval(e, x);
    return f;
  }
};

inline FormExpr exterior_d(const FormExpr& w) {
  FormExpr r(w.n);
  for (auto& [I, e] : w.terms)
    for (int i = 0; i < w.n; ++i) {
      if (I >> i & 1) continue;
      Expr de = derivative(e, i);
      if (is_const(de, 0)) continue;
      r.add(I | (1 << i), constant(wedge_sign(1 << i, I)) * de);
    }
  return r;
}

inline FormExpr differential(int n, const Expr& f) { return exterior_d(FormExpr::function(n, f)); }

// pullback along a chart-affine map
inline FormExpr pullback(const FormExpr& w, const AffineMap& m) {
  FormExpr r(w.n);
  for (auto& [I, e] : w.terms) {
    // dy_i = sign_i dx_{perm_i}
    int J = 0;
    double s = 1;
    std::vector<int> order;
    for (int i = 0; i < w.n; ++i)
      if (I >> i & 1) {
        s *= m.sign[i];
        order.push_back(m.perm[i]);
      }
    // sign of sorting the permuted indices
    for (size_t a = 0; a < order.size(); ++a) {
      J |= 1 << order[a];
      for (size_t b = a + 1; b < order.size(); ++b)
        if (order[a] > order[b]) s = -s;
    }
    r.add(J, constant(s) * substitute(e, m));
  }
  return r;
}

// ---- parser ----
// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'^'|'/') factor)*  ('^' is the wedge; differentials are d<coord>; '/' takes a constant)
// factor := number | 'pi' | sin(arg) | cos(arg) | '(' expr ')' | '-' factor | d<coord>
// arg    := [number '*'] coord [('+'|'-') number ['*' 'pi']]
class FormParser {
 public:
  FormParser(std::string src, std::vector<std::string> coords) : s_(std::move(src)), coords_(std::move(coords)) {}

  FormExpr parse() {
    FormExpr w = expr();
    skip();
    if (p_ != s_.size()) fail("unexpected character");
    return w;
  }

 private:
  std::string s_;
  std::vector<std::string> coords_;
  size_t p_ = 0;

  [[noreturn]] void fail(const std::string& m) const {
    throw parse_error("expression parse error at column " + std::to_string(p_ + 1) + ": " + m + " in '" + s_ + "'");
  }
  void skip() {
    while (p_ < s_.size() && std::isspace((unsigned char)s_[p_])) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  int n() const { return (int)coords_.size(); }

  std::string ident() {
    skip();
    size_t b = p_;
    while (p_ < s_.size() && (std::isalnum((unsigned char)s_[p_]) || s_[p_] == '_')) ++p_;
    return s_.substr(b, p_ - b);
  }
  int coord_index(const std::string& id) const {
    for (int i = 0; i < n(); ++i)
      if (coords_[i] == id) return i;
    return -1;
  }
  double number() {
    skip();
    size_t b = p_;
    while (p_ < s_.size() && (std::isdigit((unsigned char)s_[p_]) || s_[p_] == '.')) ++p_;
    if (b == p_) fail("number expected");
    if (p_ + 1 < s_.size() && (s_[p_] == 'e' || s_[p_] == 'E')) {
      size_t q = p_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit((unsigned char)s_[q])) {
        p_ = q;
        while (p_ < s_.size() && std::isdigit((unsigned char)s_[p_])) ++p_;
      }
    }
    double v = std::stod(s_.substr(b, p_ - b));
    skip();
    if (p_ < s_.size() && s_[p_] == '/') {
      ++p_;
      v /= number();
    }
    return v;
  }
  double scalar_atom() {
    skip();
    if (s_.compare(p_, 2, "pi") == 0) {
      p_ += 2;
      return M_PI;
    }
    return number();
  }

  FormExpr expr() {
    FormExpr w = term();
    while (true) {
      if (eat('+')) {
        merge(w, term(), 1);
      } else if (eat('-')) {
        merge(w, term(), -1);
      } else {
        return w;
      }
    }
  }
  void merge(FormExpr& w, const FormExpr& t, double s) {
    for (auto& [I, e] : t.terms) w.add(I, constant(s) * e);
  }
  FormExpr term() {
    FormExpr w = factor();
    while (true) {
      skip();
      if (eat('*') || eat('^')) {
        FormExpr f = factor();
        FormExpr r(n());
        for (auto& [I, a] : w.terms)
          for (auto& [J, b] : f.terms) {
            if (I & J) continue;
            r.add(I | J, constant(wedge_sign(I, J)) * a * b);
          }
        w = r;
      } else if (eat('/')) {
        FormExpr f = factor();
        auto it = f.terms.find(0);
        if (f.terms.size() != 1 || it == f.terms.end() || it->second->kind != ExprNode::Const || it->second->value == 0)
          fail("division by a nonconstant or zero");
        merge_scaled(w, 1 / it->second->value);
      } else {
        return w;
      }
    }
  }
  void merge_scaled(FormExpr& w, double s) {
    FormExpr r(n());
    merge(r, w, s);
    w = r;
  }
  Expr trig_arg(bool is_sin) {
    if (!eat('(')) fail("'(' expected");
    double k = 1;
    skip();
    if (p_ < s_.size() && (std::isdigit((unsigned char)s_[p_]) || s_[p_] == '.')) {
      k = number();
      if (!eat('*')) fail("'*' expected after frequency");
    }
    std::string id = ident();
    int v = coord_index(id);
    if (v < 0) fail("unknown coordinate '" + id + "'");
    double ph = 0;
    skip();
    if (p_ < s_.size() && (s_[p_] == '+' || s_[p_] == '-')) {
      double sg = s_[p_] == '-' ? -1 : 1;
      ++p_;
      ph = sg * scalar_atom();
      if (eat('*')) ph *= scalar_atom();
    }
    if (!eat(')')) fail("')' expected");
    return trig(is_sin, k, v, ph);
  }
  FormExpr factor() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end");
    char ch = s_[p_];
    if (ch == '-') {
      ++p_;
      FormExpr f = factor();
      FormExpr r(n());
      merge(r, f, -1);
      return r;
    }
    if (ch == '(') {
      ++p_;
      FormExpr f = expr();
      if (!eat(')')) fail("')' expected");
      return f;
    }
    if (std::isdigit((unsigned char)ch) || ch == '.') return FormExpr::function(n(), constant(number()));
    std::string id = ident();
    if (id.empty()) fail("unexpected character");
    if (id == "pi") return FormExpr::function(n(), constant(M_PI));
    if (id == "sin" || id == "cos") return FormExpr::function(n(), trig_arg(id == "sin"));
    if (id.size() > 1 && id[0] == 'd') {
      int v = coord_index(id.substr(1));
      if (v >= 0) {
        FormExpr w(n());
        w.terms[1 << v] = constant(1);
        return w;
      }
    }
    fail("unknown identifier '" + id + "'");
  }
};

inline FormExpr parse_form(const std::string& s, const std::vector<std::string>& coords) {
  return FormParser(s, coords).parse();
}

// a 0-form expression; rejects forms of positive degree
inline Expr parse_function(const std::string& s, const std::vector<std::string>& coords) {
  FormExpr w = parse_form(s, coords);
  for (auto& [I, e] : w.terms)
    if (I != 0) throw parse_error("function expected, got a form of positive degree: '" + s + "'");
  auto it = w.terms.find(0);
  return it == w.terms.end() ? constant(0) : it->second;
}

}  // namespace ncx
