#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sympcon/exact_linalg.hpp"
#include "sympcon/rootsys.hpp"

namespace sympcon {

template <class K>
using SparseVec = std::vector<std::pair<std::size_t, K>>;

template <class K>
Vec<K> densify(const SparseVec<K>& s, std::size_t n) {
  Vec<K> v(n, K(0));
  for (const auto& [i, c] : s) v[i] += c;
  return v;
}

template <class K>
SparseVec<K> sparsify(const Vec<K>& v) {
  SparseVec<K> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!is_zero(v[i])) s.emplace_back(i, v[i]);
  return s;
}

/// Exact Lie algebra given by structure constants on a fixed basis. The
/// Killing form is always computed from adjoint traces.
template <class K = Rational>
struct LieAlgebra {
  std::size_t dim = 0;
  std::string name;
  std::vector<std::string> labels;
  // Upper-triangular storage: bracket_table[i][j-i-1] = [e_i, e_j] for i < j.
  std::vector<std::vector<SparseVec<K>>> bracket_table;
  Mat<K> killing;

  /// Optional concrete matrix realization (entries Gaussian; real models have
  /// zero imaginary parts). Brackets of model matrices are commutators.
  struct MatrixModel {
    std::size_t N = 0;
    std::vector<Mat<Gaussian>> basis;
  };
  std::optional<MatrixModel> model;

  SparseVec<K> bracket_basis(std::size_t i, std::size_t j) const {
    if (i == j) return {};
    if (i < j) return bracket_table[i][j - i - 1];
    SparseVec<K> s = bracket_table[j][i - j - 1];
    for (auto& [k, c] : s) c = -c;
    return s;
  }

  Vec<K> bracket(const Vec<K>& x, const Vec<K>& y) const {
    Vec<K> out(dim, K(0));
    for (std::size_t i = 0; i < dim; ++i) {
      if (is_zero(x[i])) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (is_zero(y[j]) || i == j) continue;
        K c = x[i] * y[j];
        if (i < j) {
          for (const auto& [k, v] : bracket_table[i][j - i - 1]) out[k] += c * v;
        } else {
          for (const auto& [k, v] : bracket_table[j][i - j - 1]) out[k] -= c * v;
        }
      }
    }
    return out;
  }

  Mat<K> ad_matrix(const Vec<K>& x) const {
    Mat<K> m = zero_mat<K>(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
      Vec<K> ej(dim, K(0));
      ej[j] = K(1);
      Vec<K> col = bracket(x, ej);
      for (std::size_t i = 0; i < dim; ++i) m[i][j] = col[i];
    }
    return m;
  }

  Vec<K> basis_vector(std::size_t i) const {
    Vec<K> v(dim, K(0));
    v[i] = K(1);
    return v;
  }

  K killing_form(const Vec<K>& x, const Vec<K>& y) const {
    K s(0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (is_zero(x[i])) continue;
      for (std::size_t j = 0; j < dim; ++j)
        if (!is_zero(y[j])) s += x[i] * killing[i][j] * y[j];
    }
    return s;
  }
};

namespace detail {

template <class K>
void compute_killing(LieAlgebra<K>& L) {
  // B_ij = tr(ad_i ad_j) via the sparse table.
  L.killing = zero_mat<K>(L.dim, L.dim);
  for (std::size_t i = 0; i < L.dim; ++i) {
    for (std::size_t j = i; j < L.dim; ++j) {
      K s(0);
      for (std::size_t k = 0; k < L.dim; ++k) {
        // coefficient of e_k in [e_i, [e_j, e_k]]
        for (const auto& [l, c] : L.bracket_basis(j, k)) {
          for (const auto& [m, d] : L.bracket_basis(i, l)) {
            if (m == k) s += c * d;
          }
        }
      }
      L.killing[i][j] = s;
      L.killing[j][i] = s;
    }
  }
}

}  // namespace detail

/// Assemble an algebra from an upper-triangular bracket table and compute its
/// Killing form.
template <class K>
LieAlgebra<K> make_lie_algebra(std::size_t dim, std::vector<std::string> labels,
                               std::vector<std::vector<SparseVec<K>>> table,
                               std::string name) {
  LieAlgebra<K> L;
  L.dim = dim;
  L.labels = std::move(labels);
  L.bracket_table = std::move(table);
  L.name = std::move(name);
  detail::compute_killing(L);
  return L;
}

/// True iff the Jacobi identity holds exactly on all basis triples.
template <class K>
bool jacobi_audit(const LieAlgebra<K>& L, std::string* witness = nullptr) {
  for (std::size_t i = 0; i < L.dim; ++i)
    for (std::size_t j = i + 1; j < L.dim; ++j)
      for (std::size_t k = j + 1; k < L.dim; ++k) {
        Vec<K> acc(L.dim, K(0));
        for (const auto& [l, c] : L.bracket_basis(i, j))
          for (const auto& [m, d] : L.bracket_basis(l, k)) acc[m] += c * d;
        for (const auto& [l, c] : L.bracket_basis(j, k))
          for (const auto& [m, d] : L.bracket_basis(l, i)) acc[m] += c * d;
        for (const auto& [l, c] : L.bracket_basis(k, i))
          for (const auto& [m, d] : L.bracket_basis(l, j)) acc[m] += c * d;
        if (!vec_is_zero(acc)) {
          if (witness)
            *witness = "jacobi fails at basis triple (" + std::to_string(i) + "," +
                       std::to_string(j) + "," + std::to_string(k) + ")";
          return false;
        }
      }
  return true;
}

/// Exact centralizer {x : [x,a] = 0} = ker ad(a).
template <class K>
Subspace<K> centralizer(const LieAlgebra<K>& L, const Vec<K>& a) {
  Mat<K> ad = L.ad_matrix(a);
  return Subspace<K>::from_vectors(L.dim, kernel(std::move(ad)));
}

/// Bracket-closure of a subspace check plus structure constants of the
/// subalgebra in the given basis.
template <class K>
std::vector<std::vector<SparseVec<K>>> subalgebra_table(const LieAlgebra<K>& L,
                                                        const Subspace<K>& h) {
  std::size_t m = h.dim();
  std::vector<std::vector<SparseVec<K>>> table(m);
  for (std::size_t a = 0; a < m; ++a) {
    table[a].resize(m - a - 1);
    for (std::size_t b = a + 1; b < m; ++b) {
      Vec<K> br = L.bracket(h.basis[a], h.basis[b]);
      auto c = h.coords_of(br);
      if (!c) throw std::domain_error("subalgebra_table: subspace not closed under bracket");
      table[a][b - a - 1] = sparsify(*c);
    }
  }
  return table;
}

/// Killing form of the subalgebra spanned by h (its own adjoint traces),
/// as a matrix over the basis of h.
template <class K>
Mat<K> subalgebra_killing(const LieAlgebra<K>& L, const Subspace<K>& h) {
  auto table = subalgebra_table(L, h);
  LieAlgebra<K> sub;
  sub.dim = h.dim();
  sub.bracket_table = std::move(table);
  detail::compute_killing(sub);
  return sub.killing;
}

/// The constant c with B_h = c * (B_g)|_h on a simple subalgebra h of g.
/// Checked entrywise; 0 < c <= 1 enforced for rational scalars.
template <class K>
K killing_ratio(const LieAlgebra<K>& L, const Subspace<K>& h) {
  Mat<K> Bh = subalgebra_killing(L, h);
  std::size_t m = h.dim();
  Mat<K> Bg = zero_mat<K>(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) Bg[a][b] = L.killing_form(h.basis[a], h.basis[b]);
  K c(0);
  for (std::size_t a = 0; a < m && is_zero(c); ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (!is_zero(Bg[a][b])) {
        c = Bh[a][b] / Bg[a][b];
        break;
      }
  if (is_zero(c)) throw std::domain_error("killing_ratio: restricted Killing form degenerate");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (Bh[a][b] != c * Bg[a][b])
        throw std::domain_error("killing_ratio: forms not proportional (h not simple?)");
  if (real_part(c) <= 0 || real_part(c) > 1 || !is_zero(imag_part(c)))
    throw std::domain_error("killing_ratio: constant outside (0,1]");
  return c;
}

// ---------------------------------------------------------------------------
// Chevalley construction for split forms.
// ---------------------------------------------------------------------------

namespace detail {

/// Structure-constant engine N(beta,gamma) with extraspecial pairs fixed by
/// lexicographic order and all remaining signs propagated through the
/// standard three- and four-root relations.
class ChevalleyConstants {
 public:
  explicit ChevalleyConstants(const RootSystem& rs) : rs_(rs) {}

  // max k >= 0 with gamma - k*beta a root
  long p_value(std::size_t b, std::size_t g) const {
    long k = 0;
    std::vector<int> v = rs_.roots[g];
    while (true) {
      for (int i = 0; i < rs_.rank; ++i) v[i] -= rs_.roots[b][i];
      if (!rs_.is_root(v)) return k;
      ++k;
    }
  }

  Rational N(std::size_t b, std::size_t g) {
    std::vector<int> sum(rs_.rank);
    for (int i = 0; i < rs_.rank; ++i) sum[i] = rs_.roots[b][i] + rs_.roots[g][i];
    if (!rs_.is_root(sum)) return Rational(0);
    Rational val = n_impl(b, g);
    long p = p_value(b, g);
    if (boost::multiprecision::abs(num(val)) != p + 1 || den(val) != 1)
      throw std::logic_error("chevalley: constant not +-(p+1)");
    return val;
  }

 private:
  bool positive(std::size_t i) const { return i < rs_.n_positive; }

  std::size_t add_index(std::size_t b, std::size_t g) const {
    std::vector<int> sum(rs_.rank);
    for (int i = 0; i < rs_.rank; ++i) sum[i] = rs_.roots[b][i] + rs_.roots[g][i];
    auto idx = rs_.index_of(sum);
    if (!idx) throw std::logic_error("chevalley: sum not a root");
    return *idx;
  }

  Rational n_impl(std::size_t b, std::size_t g) {
    auto key = std::make_pair(b, g);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Rational val;
    if (positive(b) && positive(g)) {
      val = n_positive_pair(b, g);
    } else if (!positive(b) && !positive(g)) {
      val = -n_impl(rs_.neg_index(b), rs_.neg_index(g));
    } else {
      // mixed signs: rotate through (b,g) -> (g,z) with z = -(b+g), using
      // N(b,g) = N(g,z) * (z,z)/(b,b); flip both signs when that reaches a
      // both-negative pair.
      std::size_t z = rs_.neg_index(add_index(b, g));
      if (positive(g) || positive(z)) {
        val = n_impl(g, z) * rs_.norm2[z] / rs_.norm2[b];
      } else {
        val = -n_impl(rs_.neg_index(b), rs_.neg_index(g));
      }
    }
    memo_[key] = val;
    return val;
  }

  Rational n_positive_pair(std::size_t b, std::size_t g) {
    if (rs_.roots[g] < rs_.roots[b]) return -n_impl(g, b);
    std::size_t delta = add_index(b, g);
    auto [eps, eta] = extraspecial(delta);
    if (b == eps) return Rational(p_value(b, g) + 1);
    // Four-root relation on (eps, eta, -b, -g).
    Rational t(0);
    std::vector<int> d1(rs_.rank), d2(rs_.rank);
    for (int i = 0; i < rs_.rank; ++i) {
      d1[i] = rs_.roots[eta][i] - rs_.roots[b][i];
      d2[i] = rs_.roots[eps][i] - rs_.roots[b][i];
    }
    std::size_t nb = rs_.neg_index(b), ng = rs_.neg_index(g);
    if (auto i1 = rs_.index_of(d1)) {
      t += n_impl(eta, nb) * n_impl(eps, ng) / rs_.norm2[*i1];
    }
    if (auto i2 = rs_.index_of(d2)) {
      t += n_impl(nb, eps) * n_impl(eta, ng) / rs_.norm2[*i2];
    }
    Rational n_extra(p_value(eps, eta) + 1);
    return rs_.norm2[delta] * t / n_extra;
  }

  std::pair<std::size_t, std::size_t> extraspecial(std::size_t delta) {
    auto it = extra_.find(delta);
    if (it != extra_.end()) return it->second;
    std::size_t best = rs_.size();
    for (std::size_t x = 0; x < rs_.n_positive; ++x) {
      std::vector<int> rest(rs_.rank);
      for (int i = 0; i < rs_.rank; ++i) rest[i] = rs_.roots[delta][i] - rs_.roots[x][i];
      auto ri = rs_.index_of(rest);
      if (!ri || !positive(*ri)) continue;
      if (best == rs_.size() || rs_.roots[x] < rs_.roots[best]) best = x;
    }
    if (best == rs_.size()) throw std::logic_error("chevalley: no special pair for root");
    auto pair = std::make_pair(best, *rs_.index_of([&] {
      std::vector<int> rest(rs_.rank);
      for (int i = 0; i < rs_.rank; ++i) rest[i] = rs_.roots[delta][i] - rs_.roots[best][i];
      return rest;
    }()));
    extra_[delta] = pair;
    return pair;
  }

  const RootSystem& rs_;
  std::map<std::pair<std::size_t, std::size_t>, Rational> memo_;
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> extra_;
};

}  // namespace detail

/// Split form over the rationals: basis H_1..H_r (simple coroots) followed by
/// one root vector per root, in the root system's enumeration order.
inline LieAlgebra<Rational> chevalley_algebra(const RootSystem& rs) {
  std::size_t r = rs.rank, n = rs.size();
  std::size_t dim = r + n;
  detail::ChevalleyConstants nc(rs);

  auto root_basis = [&](std::size_t root_idx) { return r + root_idx; };

  // d_i = (alpha_i, alpha_i)/2 per simple root; coroot expansion of beta:
  // c_i = beta_i d_i / d_beta, always integral.
  std::vector<Rational> d(r);
  for (std::size_t i = 0; i < r; ++i) d[i] = rs.gram[i][i] / 2;

  std::vector<std::vector<SparseVec<Rational>>> table(dim);
  for (std::size_t i = 0; i < dim; ++i) table[i].resize(dim - i - 1);
  auto set_bracket = [&](std::size_t i, std::size_t j, SparseVec<Rational> v) {
    if (i < j) {
      table[i][j - i - 1] = std::move(v);
    } else if (j < i) {
      for (auto& [k, c] : v) c = -c;
      table[j][i - j - 1] = std::move(v);
    }
  };

  // [H_i, e_beta] = <beta, alpha_i> e_beta
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<int> ai(r, 0);
    for (std::size_t b = 0; b < n; ++b) {
      long p = 0;
      for (std::size_t j = 0; j < r; ++j) {
        Rational pr = Rational(rs.roots[b][j]) * rs.cartan[j][i];
        p += static_cast<long>(num(pr));  // cartan entries integral
      }
      if (p != 0) set_bracket(i, root_basis(b), {{root_basis(b), Rational(p)}});
    }
  }

  // Root-root brackets.
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t g = b + 1; g < n; ++g) {
      if (g == rs.neg_index(b)) {
        // [e_beta, e_{-beta}] = H_beta in coroot coordinates
        Rational dbeta = rs.norm2[b] / 2;
        SparseVec<Rational> h;
        for (std::size_t i = 0; i < r; ++i) {
          Rational c = Rational(rs.roots[b][i]) * d[i] / dbeta;
          if (!is_zero(c)) {
            if (den(c) != 1) throw std::logic_error("chevalley: non-integral coroot");
            h.emplace_back(i, c);
          }
        }
        set_bracket(root_basis(b), root_basis(g), std::move(h));
        continue;
      }
      std::vector<int> sum(rs.rank);
      for (int i = 0; i < rs.rank; ++i) sum[i] = rs.roots[b][i] + rs.roots[g][i];
      auto si = rs.index_of(sum);
      if (!si) continue;
      Rational Nbg = nc.N(b, g);
      set_bracket(root_basis(b), root_basis(g), {{root_basis(*si), Nbg}});
    }
  }

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < r; ++i) labels.push_back("H" + std::to_string(i + 1));
  for (std::size_t b = 0; b < n; ++b) {
    std::string s = "e[";
    for (int i = 0; i < rs.rank; ++i) s += (i ? "," : "") + std::to_string(rs.roots[b][i]);
    s += "]";
    labels.push_back(s);
  }
  std::string name = kind_name(rs.kind) + std::to_string(rs.rank) + "_split";
  return make_lie_algebra(dim, std::move(labels), std::move(table), std::move(name));
}

// ---------------------------------------------------------------------------
// Matrix-model construction.
// ---------------------------------------------------------------------------

namespace detail {

inline Vec<Rational> vectorize(const Mat<Gaussian>& m) {
  Vec<Rational> v;
  v.reserve(2 * m.size() * m.size());
  for (const auto& row : m)
    for (const auto& x : row) {
      v.push_back(x.re);
      v.push_back(x.im);
    }
  return v;
}

inline Mat<Gaussian> commutator(const Mat<Gaussian>& a, const Mat<Gaussian>& b) {
  std::size_t n = a.size();
  Mat<Gaussian> out = zero_mat<Gaussian>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (!is_zero(a[i][k]))
        for (std::size_t j = 0; j < n; ++j)
          if (!is_zero(b[k][j])) out[i][j] += a[i][k] * b[k][j];
      if (!is_zero(b[i][k]))
        for (std::size_t j = 0; j < n; ++j)
          if (!is_zero(a[k][j])) out[i][j] -= b[i][k] * a[k][j];
    }
  return out;
}

}  // namespace detail

/// Real Lie algebra spanned by the given matrices (entries Gaussian rational;
/// realified when imaginary parts occur). Structure constants are computed by
/// exact expansion of commutators in the given basis.
inline LieAlgebra<Rational> algebra_from_matrices(std::vector<Mat<Gaussian>> basis,
                                                  std::vector<std::string> labels,
                                                  std::string name) {
  std::size_t d = basis.size();
  std::size_t N = basis.empty() ? 0 : basis[0].size();
  Mat<Rational> A;  // (2N^2) x d coefficient matrix
  for (std::size_t j = 0; j < d; ++j) {
    auto col = detail::vectorize(basis[j]);
    if (A.empty()) A = zero_mat<Rational>(col.size(), d);
    for (std::size_t i = 0; i < col.size(); ++i) A[i][j] = col[i];
  }
  if (rank(A) != d) throw std::invalid_argument("algebra_from_matrices: basis not independent");

  std::vector<std::vector<SparseVec<Rational>>> table(d);
  for (std::size_t i = 0; i < d; ++i) table[i].resize(d - i - 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      auto com = detail::commutator(basis[i], basis[j]);
      auto rhs = detail::vectorize(com);
      auto x = solve(A, rhs);
      if (!x) throw std::domain_error("algebra_from_matrices: bracket leaves span");
      // solve() gives one solution; independence makes it unique
      table[i][j - i - 1] = sparsify(*x);
    }

  auto L = make_lie_algebra(d, std::move(labels), std::move(table), std::move(name));
  L.model = typename LieAlgebra<Rational>::MatrixModel{N, std::move(basis)};
  return L;
}

inline Mat<Gaussian> model_matrix_of(const LieAlgebra<Rational>& L, const Vec<Rational>& x) {
  if (!L.model) throw std::domain_error("algebra has no matrix model");
  std::size_t N = L.model->N;
  Mat<Gaussian> out = zero_mat<Gaussian>(N, N);
  for (std::size_t i = 0; i < L.dim; ++i) {
    if (is_zero(x[i])) continue;
    Gaussian c(x[i]);
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t s = 0; s < N; ++s) out[r][s] += c * L.model->basis[i][r][s];
  }
  return out;
}

/// Exact coordinates of a model matrix in the algebra basis.
inline Vec<Rational> model_coords_of(const LieAlgebra<Rational>& L, const Mat<Gaussian>& m) {
  if (!L.model) throw std::domain_error("algebra has no matrix model");
  std::size_t d = L.dim;
  Mat<Rational> A;
  for (std::size_t j = 0; j < d; ++j) {
    auto col = detail::vectorize(L.model->basis[j]);
    if (A.empty()) A = zero_mat<Rational>(col.size(), d);
    for (std::size_t i = 0; i < col.size(); ++i) A[i][j] = col[i];
  }
  auto x = solve(A, detail::vectorize(m));
  if (!x) throw std::domain_error("model_coords_of: matrix not in the algebra");
  return *x;
}

}  // namespace sympcon
