#pragma once

#include "ncx/scalar.hpp"

#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace ncx {

// Dense matrix over Gaussian rationals.
struct Matrix {
  int r = 0, c = 0;
  std::vector<C> a;

  Matrix() = default;
  Matrix(int rows, int cols) : r(rows), c(cols), a((size_t)rows * cols) {}

  C& operator()(int i, int j) { return a[(size_t)i * c + j]; }
  const C& operator()(int i, int j) const { return a[(size_t)i * c + j]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = C(1);
    return m;
  }

  bool is_zero() const {
    for (auto& z : a)
      if (!z.is_zero()) return false;
    return true;
  }

  Matrix adjoint() const {
    Matrix m(c, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(j, i) = (*this)(i, j).conj();
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check(o);
    for (size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check(o);
    for (size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
    return *this;
  }
  Matrix& operator*=(const C& s) {
    for (auto& z : a) z *= s;
    return *this;
  }
  friend Matrix operator+(Matrix x, const Matrix& y) { return x += y; }
  friend Matrix operator-(Matrix x, const Matrix& y) { return x -= y; }
  friend Matrix operator*(const C& s, Matrix x) { return x *= s; }
  friend bool operator==(const Matrix& x, const Matrix& y) { return x.r == y.r && x.c == y.c && x.a == y.a; }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.c != y.r) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix m(x.r, y.c);
    for (int i = 0; i < x.r; ++i)
      for (int k = 0; k < x.c; ++k) {
        const C& v = x(i, k);
        if (v.is_zero()) continue;
        for (int j = 0; j < y.c; ++j) {
          const C& w = y(k, j);
          if (!w.is_zero()) m(i, j) += v * w;
        }
      }
    return m;
  }

  C trace() const {
    C s(0);
    for (int i = 0; i < std::min(r, c); ++i) s += (*this)(i, i);
    return s;
  }

 private:
  void check(const Matrix& o) const {
    if (o.r != r || o.c != c) throw std::invalid_argument("matrix dimension mismatch");
  }
};

// reduced row echelon form in place; returns pivot columns
inline std::vector<int> rref(Matrix& m) {
  std::vector<int> piv;
  int row = 0;
  for (int col = 0; col < m.c && row < m.r; ++col) {
    int p = -1;
    for (int i = row; i < m.r; ++i)
      if (!m(i, col).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.c; ++j) std::swap(m(p, j), m(row, j));
    C s = inv(m(row, col));
    for (int j = col; j < m.c; ++j) m(row, j) *= s;
    for (int i = 0; i < m.r; ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      C f = m(i, col);
      for (int j = col; j < m.c; ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

inline int rank(Matrix m) { return (int)rref(m).size(); }

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.r != m.c) return std::nullopt;
  int n = m.r;
  Matrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = C(1);
  }
  auto piv = rref(aug);
  if ((int)piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
  return r;
}

// columns spanning the column space, taken from the original matrix
inline Matrix column_basis(const Matrix& m) {
  Matrix t = m;
  auto piv = rref(t);
  Matrix b(m.r, (int)piv.size());
  for (size_t k = 0; k < piv.size(); ++k)
    for (int i = 0; i < m.r; ++i) b(i, (int)k) = m(i, piv[k]);
  return b;
}

// columns spanning the kernel
inline Matrix kernel_basis(const Matrix& m) {
  Matrix t = m;
  auto piv = rref(t);
  std::vector<char> is_piv(m.c, 0);
  for (int p : piv) is_piv[p] = 1;
  std::vector<int> free;
  for (int j = 0; j < m.c; ++j)
    if (!is_piv[j]) free.push_back(j);
  Matrix k(m.c, (int)free.size());
  for (size_t f = 0; f < free.size(); ++f) {
    k(free[f], (int)f) = C(1);
    for (size_t i = 0; i < piv.size(); ++i) k(piv[i], (int)f) = -t((int)i, free[f]);
  }
  return k;
}

inline Matrix block_diag(const Matrix& x, const Matrix& y) {
  Matrix m(x.r + y.r, x.c + y.c);
  for (int i = 0; i < x.r; ++i)
    for (int j = 0; j < x.c; ++j) m(i, j) = x(i, j);
  for (int i = 0; i < y.r; ++i)
    for (int j = 0; j < y.c; ++j) m(x.r + i, x.c + j) = y(i, j);
  return m;
}

inline Matrix submatrix(const Matrix& m, int r0, int c0, int nr, int nc) {
  Matrix s(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) s(i, j) = m(r0 + i, c0 + j);
  return s;
}

inline void set_block(Matrix& m, int r0, int c0, const Matrix& b) {
  for (int i = 0; i < b.r; ++i)
    for (int j = 0; j < b.c; ++j) m(r0 + i, c0 + j) = b(i, j);
}

// Kronecker product
inline Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix m(x.r * y.r, x.c * y.c);
  for (int i = 0; i < x.r; ++i)
    for (int j = 0; j < x.c; ++j) {
      if (x(i, j).is_zero()) continue;
      for (int k = 0; k < y.r; ++k)
        for (int l = 0; l < y.c; ++l) m(i * y.r + k, j * y.c + l) = x(i, j) * y(k, l);
    }
  return m;
}

inline Matrix random_matrix(int r, int c, std::mt19937_64& rng, bool complex = true) {
  Matrix m(r, c);
  for (auto& z : m.a) z = rand_c(rng, complex);
  return m;
}

}  // namespace ncx
