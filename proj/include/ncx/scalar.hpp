#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace ncx {

using Q = mpq_class;

// Gaussian rational re + im*i.
struct C {
  Q re, im;

  C() = default;
  C(long r) : re(r), im(0) {}
  C(const Q& r) : re(r), im(0) {}
  C(const Q& r, const Q& i) : re(r), im(i) {}

  static C i() { return C(Q(0), Q(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  C conj() const { return C(re, -im); }
  Q norm2() const { return re * re + im * im; }

  C& operator+=(const C& o) { re += o.re; im += o.im; return *this; }
  C& operator-=(const C& o) { re -= o.re; im -= o.im; return *this; }
  C& operator*=(const C& o) {
    if (sgn(im) == 0 && sgn(o.im) == 0) {
      re *= o.re;
      return *this;
    }
    Q r = re * o.re - im * o.im;
    Q s = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(s);
    return *this;
  }
  C& operator/=(const C& o) {
    if (o.is_zero()) throw std::domain_error("division by zero scalar");
    if (sgn(o.im) == 0) {
      re /= o.re;
      im /= o.re;
      return *this;
    }
    Q n = o.norm2();
    Q r = (re * o.re + im * o.im) / n;
    Q s = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(s);
    return *this;
  }
  C operator-() const { return C(-re, -im); }

  friend C operator+(C a, const C& b) { return a += b; }
  friend C operator-(C a, const C& b) { return a -= b; }
  friend C operator*(C a, const C& b) { return a *= b; }
  friend C operator/(C a, const C& b) { return a /= b; }
  friend bool operator==(const C& a, const C& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const C& a, const C& b) { return !(a == b); }
  friend bool operator<(const C& a, const C& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }
};

inline C inv(const C& z) { return C(1) / z; }

// field helpers so templates work over Q and C alike
inline bool is_zero(const Q& q) { return sgn(q) == 0; }
inline bool is_zero(const C& z) { return z.is_zero(); }

inline std::string q_str(const Q& q) {
  if (q.get_den() == 1) return q.get_num().get_str() + "/1";
  return q.get_str();
}

// "p/q" or "p" accepted
inline Q parse_q(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  Q q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string q_plain(const Q& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

// "re", "re+imi", "re-imi", "imi"
inline std::string c_str(const C& z) {
  if (sgn(z.im) == 0) return q_plain(z.re);
  std::string im = q_plain(abs(z.im)) + "i";
  if (sgn(z.re) == 0) return (sgn(z.im) < 0 ? "-" : "") + im;
  return q_plain(z.re) + (sgn(z.im) < 0 ? "-" : "+") + im;
}

inline C parse_c(const std::string& s0) {
  std::string s;
  for (char ch : s0)
    if (ch != ' ') s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty scalar");
  if (s.back() != 'i') return C(parse_q(s));
  std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not the leading one
  size_t cut = std::string::npos;
  for (size_t k = body.size(); k-- > 1;)
    if (body[k] == '+' || body[k] == '-') {
      cut = k;
      break;
    }
  auto imag = [](std::string t) {
    if (t.empty() || t == "+") return Q(1);
    if (t == "-") return Q(-1);
    if (t[0] == '+') t = t.substr(1);
    return parse_q(t);
  };
  if (cut == std::string::npos) return C(Q(0), imag(body));
  return C(parse_q(body.substr(0, cut)), imag(body.substr(cut)));
}

inline std::ostream& operator<<(std::ostream& os, const C& z) { return os << c_str(z); }

// seeded small rationals
inline Q rand_q(std::mt19937_64& rng, int span = 5, int den = 3) {
  std::uniform_int_distribution<int> n(-span, span), d(1, den);
  Q q(n(rng), d(rng));
  q.canonicalize();
  return q;
}

inline C rand_c(std::mt19937_64& rng, bool complex = true, int span = 5, int den = 3) {
  C z(rand_q(rng, span, den));
  if (complex) z.im = rand_q(rng, span, den);
  return z;
}

}  // namespace ncx
