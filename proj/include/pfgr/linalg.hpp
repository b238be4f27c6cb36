#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pfgr {

// Dense row-major matrix. Element type is the field's Elem.
template <class T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, const T& fill) : rows(r), cols(c), a(r * c, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a.begin() + static_cast<std::ptrdiff_t>(i * cols),
                          a.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }
};

template <class K>
using MatrixOf = Matrix<typename K::Elem>;
template <class K>
using VectorOf = std::vector<typename K::Elem>;

template <class K>
MatrixOf<K> zeros(const K& k, std::size_t r, std::size_t c) {
  return MatrixOf<K>(r, c, k.zero());
}

template <class K>
MatrixOf<K> from_rows(const K& k, const std::vector<VectorOf<K>>& rows, std::size_t cols) {
  MatrixOf<K> m = zeros(k, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("from_rows: ragged input");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

template <class K>
MatrixOf<K> transpose(const K& k, const MatrixOf<K>& m) {
  MatrixOf<K> t = zeros(k, m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

template <class K>
MatrixOf<K> multiply(const K& k, const MatrixOf<K>& x, const MatrixOf<K>& y) {
  if (x.cols != y.rows) throw std::invalid_argument("multiply: shape mismatch");
  MatrixOf<K> out = zeros(k, x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t l = 0; l < x.cols; ++l) {
      const auto& xv = x(i, l);
      if (k.is_zero(xv)) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) = k.add(out(i, j), k.mul(xv, y(l, j)));
    }
  return out;
}

template <class K>
VectorOf<K> apply(const K& k, const MatrixOf<K>& m, const VectorOf<K>& v) {
  if (m.cols != v.size()) throw std::invalid_argument("apply: shape mismatch");
  VectorOf<K> out(m.rows, k.zero());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out[i] = k.add(out[i], k.mul(m(i, j), v[j]));
  return out;
}

template <class K>
bool is_zero_matrix(const K& k, const MatrixOf<K>& m) {
  for (const auto& e : m.a)
    if (!k.is_zero(e)) return false;
  return true;
}

template <class K>
bool is_zero_vector(const K& k, const VectorOf<K>& v) {
  for (const auto& e : v)
    if (!k.is_zero(e)) return false;
  return true;
}

// In-place reduced row echelon form; returns pivot columns in order.
template <class K>
std::vector<std::size_t> rref(const K& k, MatrixOf<K>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && k.is_zero(m(p, c))) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    const auto inv = k.inv(m(r, c));
    for (std::size_t j = c; j < m.cols; ++j) m(r, j) = k.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || k.is_zero(m(i, c))) continue;
      const auto f = m(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Rank by forward elimination only (cheaper than full RREF).
template <class K>
std::size_t rank(const K& k, MatrixOf<K> m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && k.is_zero(m(p, c))) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = c; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    const auto inv = k.inv(m(r, c));
    for (std::size_t i = r + 1; i < m.rows; ++i) {
      if (k.is_zero(m(i, c))) continue;
      const auto f = k.mul(m(i, c), inv);
      for (std::size_t j = c; j < m.cols; ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(r, j)));
    }
    ++r;
  }
  return r;
}

// Basis of the right kernel {v : m v = 0}, returned as rows.
template <class K>
MatrixOf<K> kernel(const K& k, MatrixOf<K> m) {
  const auto pivots = rref(k, m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  MatrixOf<K> basis = zeros(k, m.cols - pivots.size(), m.cols);
  std::size_t row = 0;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    basis(row, free) = k.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) basis(row, pivots[i]) = k.neg(m(i, free));
    ++row;
  }
  return basis;
}

// Canonical solution of m x = rhs with free variables set to zero.
template <class K>
std::optional<VectorOf<K>> solve(const K& k, const MatrixOf<K>& m, const VectorOf<K>& rhs) {
  if (rhs.size() != m.rows) throw std::invalid_argument("solve: shape mismatch");
  MatrixOf<K> aug = zeros(k, m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = rhs[i];
  }
  const auto pivots = rref(k, aug);
  if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;
  VectorOf<K> x(m.cols, k.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols);
  return x;
}

template <class K>
typename K::Elem dot(const K& k, const VectorOf<K>& u, const VectorOf<K>& v) {
  typename K::Elem s = k.zero();
  for (std::size_t i = 0; i < u.size(); ++i) s = k.add(s, k.mul(u[i], v[i]));
  return s;
}

}  // namespace pfgr
