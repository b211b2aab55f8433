#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "sympcon/scalars.hpp"

namespace sympcon {

template <class K>
using Vec = std::vector<K>;
template <class K>
using Mat = std::vector<std::vector<K>>;

template <class K>
Mat<K> zero_mat(std::size_t r, std::size_t c) {
  return Mat<K>(r, Vec<K>(c, K(0)));
}

template <class K>
Mat<K> identity_mat(std::size_t n) {
  Mat<K> m = zero_mat<K>(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = K(1);
  return m;
}

template <class K>
Vec<K> zero_vec(std::size_t n) {
  return Vec<K>(n, K(0));
}

template <class K>
bool vec_is_zero(const Vec<K>& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

template <class K>
Vec<K> vec_add(Vec<K> a, const Vec<K>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <class K>
Vec<K> vec_sub(Vec<K> a, const Vec<K>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <class K>
Vec<K> vec_scale(Vec<K> a, const K& c) {
  for (auto& x : a) x *= c;
  return a;
}

template <class K>
void vec_axpy(Vec<K>& y, const K& c, const Vec<K>& x) {
  if (is_zero(c)) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!is_zero(x[i])) y[i] += c * x[i];
}

template <class K>
Vec<K> mat_vec(const Mat<K>& m, const Vec<K>& v) {
  Vec<K> out(m.size(), K(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!is_zero(m[i][j]) && !is_zero(v[j])) out[i] += m[i][j] * v[j];
  return out;
}

template <class K>
Mat<K> mat_mul(const Mat<K>& a, const Mat<K>& b) {
  std::size_t r = a.size(), mid = b.size(), c = b.empty() ? 0 : b[0].size();
  Mat<K> out = zero_mat<K>(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < mid; ++k) {
      if (is_zero(a[i][k])) continue;
      for (std::size_t j = 0; j < c; ++j)
        if (!is_zero(b[k][j])) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

template <class K>
Mat<K> mat_sub(Mat<K> a, const Mat<K>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= b[i][j];
  return a;
}

template <class K>
Mat<K> mat_transpose(const Mat<K>& a) {
  if (a.empty()) return a;
  Mat<K> out = zero_mat<K>(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  return out;
}

template <class K>
K mat_trace(const Mat<K>& a) {
  K t(0);
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

template <class K>
bool mat_is_zero(const Mat<K>& a) {
  for (const auto& row : a)
    if (!vec_is_zero(row)) return false;
  return true;
}

// Rescale a row to a primitive integer vector (fraction-free form with gcd
// reduction). Keeps entry growth bounded during elimination.
inline void primitive_normalize(Vec<Rational>& row) {
  BigInt l = 1, g = 0;
  for (const auto& x : row) {
    if (is_zero(x)) continue;
    l = boost::multiprecision::lcm(l, den(x));
  }
  for (const auto& x : row) {
    if (is_zero(x)) continue;
    g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::abs(num(x) * (l / den(x)))));
  }
  if (g == 0) return;
  Rational f = Rational(l, g);
  for (auto& x : row) x *= f;
}

inline void primitive_normalize(Vec<Gaussian>& row) {
  BigInt l = 1, g = 0;
  for (const auto& x : row) {
    if (!is_zero(x.re)) l = boost::multiprecision::lcm(l, den(x.re));
    if (!is_zero(x.im)) l = boost::multiprecision::lcm(l, den(x.im));
  }
  for (const auto& x : row) {
    if (!is_zero(x.re)) g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::abs(num(x.re) * (l / den(x.re)))));
    if (!is_zero(x.im)) g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::abs(num(x.im) * (l / den(x.im)))));
  }
  if (g == 0) return;
  Gaussian f = Gaussian(Rational(l, g));
  for (auto& x : row) x *= f;
}

enum class PivotStrategy {
  FirstNonzero,  // first nonzero entry in column order, topmost row
  SparsestRow,   // among candidate rows pick the one with fewest nonzeros
};

/// In-place reduction to reduced row echelon form (pivots 1, pivot columns
/// cleared). Returns pivot column indices, strictly increasing.
template <class K>
std::vector<std::size_t> rref_inplace(Mat<K>& m,
                                      PivotStrategy strat = PivotStrategy::FirstNonzero) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (auto& row : m) primitive_normalize(row);
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    std::size_t best_nnz = cols + 1;
    for (std::size_t i = r; i < rows; ++i) {
      if (is_zero(m[i][c])) continue;
      if (strat == PivotStrategy::FirstNonzero) {
        best = i;
        break;
      }
      std::size_t nnz = 0;
      for (std::size_t j = 0; j < cols; ++j)
        if (!is_zero(m[i][j])) ++nnz;
      if (nnz < best_nnz) {
        best_nnz = nnz;
        best = i;
      }
    }
    if (best == rows) continue;
    std::swap(m[r], m[best]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (is_zero(m[i][c])) continue;
      // row_i <- pivot*row_i - entry*row_r, then gcd-reduce
      K piv = m[r][c], entry = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = piv * m[i][j] - entry * m[r][j];
      primitive_normalize(m[i]);
    }
    pivots.push_back(c);
    ++r;
  }
  // Back substitution to reduced form with unit pivots.
  for (std::size_t k = pivots.size(); k-- > 0;) {
    std::size_t c = pivots[k];
    K inv = K(1) / m[k][c];
    for (std::size_t j = 0; j < cols; ++j) m[k][j] *= inv;
    for (std::size_t i = 0; i < k; ++i) {
      K entry = m[i][c];
      if (is_zero(entry)) continue;
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= entry * m[k][j];
    }
  }
  m.resize(pivots.size(), Vec<K>(cols, K(0)));
  return pivots;
}

template <class K>
std::size_t rank(Mat<K> m, PivotStrategy strat = PivotStrategy::FirstNonzero) {
  return rref_inplace(m, strat).size();
}

/// Basis of the right nullspace {x : M x = 0}, rows of the result.
template <class K>
Mat<K> kernel(Mat<K> m, PivotStrategy strat = PivotStrategy::FirstNonzero) {
  if (m.empty()) return {};
  std::size_t cols = m[0].size();
  auto pivots = rref_inplace(m, strat);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  Mat<K> basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    Vec<K> v(cols, K(0));
    v[c] = K(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m[k][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One particular solution of M x = b, if consistent.
template <class K>
std::optional<Vec<K>> solve(const Mat<K>& m, const Vec<K>& b) {
  if (m.empty()) return vec_is_zero(b) ? std::optional<Vec<K>>(Vec<K>{}) : std::nullopt;
  std::size_t cols = m[0].size();
  Mat<K> aug = m;
  for (std::size_t i = 0; i < m.size(); ++i) aug[i].push_back(b[i]);
  auto pivots = rref_inplace(aug);
  Vec<K> x(cols, K(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    if (pivots[k] == cols) return std::nullopt;  // pivot in the rhs column
    x[pivots[k]] = aug[k][cols];
  }
  return x;
}

/// Exact inverse of a square matrix; throws on singular input.
template <class K>
Mat<K> mat_inverse(const Mat<K>& m) {
  std::size_t n = m.size();
  Mat<K> aug = m;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? K(1) : K(0));
  }
  auto pivots = rref_inplace(aug);
  if (pivots.size() != n || pivots.back() >= n)
    throw std::domain_error("mat_inverse: singular matrix");
  Mat<K> out = zero_mat<K>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  return out;
}

/// Subspace of an ambient coordinate space, stored as a reduced-echelon basis
/// (rows independent, pivot columns strictly increasing).
template <class K>
struct Subspace {
  std::size_t ambient = 0;
  Mat<K> basis;                      // rref rows
  std::vector<std::size_t> pivots;   // pivot column per row

  Subspace() = default;
  explicit Subspace(std::size_t amb) : ambient(amb) {}

  static Subspace from_vectors(std::size_t ambient, Mat<K> vectors) {
    Subspace s(ambient);
    if (!vectors.empty()) {
      s.pivots = rref_inplace(vectors);
      s.basis = std::move(vectors);
    }
    return s;
  }

  std::size_t dim() const { return basis.size(); }

  /// Coordinates of v in the basis, if v lies in the subspace.
  std::optional<Vec<K>> coords_of(const Vec<K>& v) const {
    Vec<K> r = v;
    Vec<K> c(basis.size(), K(0));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      c[k] = r[pivots[k]];
      if (!is_zero(c[k])) vec_axpy(r, -c[k], basis[k]);
    }
    if (!vec_is_zero(r)) return std::nullopt;
    return c;
  }

  bool contains(const Vec<K>& v) const { return coords_of(v).has_value(); }

  Vec<K> from_coords(const Vec<K>& c) const {
    Vec<K> v(ambient, K(0));
    for (std::size_t k = 0; k < basis.size(); ++k) vec_axpy(v, c[k], basis[k]);
    return v;
  }
};

/// Intersection of two subspaces of the same ambient space.
template <class K>
Subspace<K> intersect(const Subspace<K>& a, const Subspace<K>& b) {
  // Solve alpha·A - beta·B = 0 over the stacked coefficient matrix.
  std::size_t da = a.dim(), db = b.dim();
  if (da == 0 || db == 0) return Subspace<K>(a.ambient);
  Mat<K> sys = zero_mat<K>(a.ambient, da + db);
  for (std::size_t j = 0; j < da; ++j)
    for (std::size_t i = 0; i < a.ambient; ++i) sys[i][j] = a.basis[j][i];
  for (std::size_t j = 0; j < db; ++j)
    for (std::size_t i = 0; i < a.ambient; ++i) sys[i][da + j] = -b.basis[j][i];
  Mat<K> null = kernel(sys);
  Mat<K> vecs;
  for (const auto& x : null) {
    Vec<K> v(a.ambient, K(0));
    for (std::size_t j = 0; j < da; ++j) vec_axpy(v, x[j], a.basis[j]);
    vecs.push_back(std::move(v));
  }
  return Subspace<K>::from_vectors(a.ambient, std::move(vecs));
}

}  // namespace sympcon
