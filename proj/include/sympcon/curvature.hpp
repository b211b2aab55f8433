#pragma once

#include <string>
#include <vector>

#include "sympcon/sympdata.hpp"

namespace sympcon {

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Index bookkeeping for Lambda^2 V: ordered pairs i < j, with the sign
/// convention for swapped arguments kept in one place.
struct PairIndex {
  std::size_t n = 0;
  explicit PairIndex(std::size_t n_) : n(n_) {}
  std::size_t count() const { return n * (n - 1) / 2; }
  std::size_t of(std::size_t i, std::size_t j) const {
    // i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }
  // index and sign for an arbitrary (i,j), i != j
  std::pair<std::size_t, int> signed_of(std::size_t i, std::size_t j) const {
    if (i < j) return {of(i, j), 1};
    return {of(j, i), -1};
  }
};

/// Antisymmetric map Lambda^2 V -> h, stored as one h-coordinate row per
/// ordered pair.
template <class K = Rational>
struct CurvatureElement {
  std::size_t dimV = 0, dimH = 0;
  Mat<K> table;  // [pair][a]

  Vec<K> at(const PairIndex& pi, std::size_t i, std::size_t j) const {
    if (i == j) return Vec<K>(dimH, K(0));
    auto [p, sgn] = pi.signed_of(i, j);
    Vec<K> v = table[p];
    if (sgn < 0)
      for (auto& c : v) c = -c;
    return v;
  }

  Vec<K> flatten() const {
    Vec<K> out;
    out.reserve(table.size() * dimH);
    for (const auto& row : table)
      for (const auto& c : row) out.push_back(c);
    return out;
  }

  static CurvatureElement from_flat(std::size_t dimV, std::size_t dimH, const Vec<K>& flat) {
    CurvatureElement r;
    r.dimV = dimV;
    r.dimH = dimH;
    PairIndex pi(dimV);
    r.table = zero_mat<K>(pi.count(), dimH);
    for (std::size_t p = 0; p < pi.count(); ++p)
      for (std::size_t a = 0; a < dimH; ++a) r.table[p][a] = flat[p * dimH + a];
    return r;
  }
};

struct CurvatureBudget {
  std::size_t max_dimV = 8;
  std::size_t max_dimH = 16;
  std::size_t max_columns = 448;  // columns of the assembled kernel system
};

template <class K>
void check_budget(const SpecialSymplecticData<K>& s, const CurvatureBudget& b) {
  std::size_t cols = s.dimV * (s.dimV - 1) / 2 * s.dimH;
  if (s.dimV > b.max_dimV || s.dimH > b.max_dimH || cols > b.max_columns)
    throw budget_error("curvature budget exceeded: needs dim V = " + std::to_string(s.dimV) +
                       ", dim h = " + std::to_string(s.dimH) + ", columns = " +
                       std::to_string(cols));
}

/// Exact basis of K(h): kernel of the first-Bianchi map
/// Lambda^2 V* (x) h -> Lambda^3 V* (x) V.
template <class K>
Subspace<K> bianchi_kernel(const SpecialSymplecticData<K>& s,
                           const CurvatureBudget& budget = {}) {
  check_budget(s, budget);
  std::size_t n = s.dimV, m = s.dimH;
  PairIndex pi(n);
  std::size_t cols = pi.count() * m;
  Mat<K> sys;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Vec<K> row(cols, K(0));
          for (std::size_t a = 0; a < m; ++a) {
            row[pi.of(i, j) * m + a] += s.h_action[a][l][k];
            row[pi.of(j, k) * m + a] += s.h_action[a][l][i];
            row[pi.of(i, k) * m + a] -= s.h_action[a][l][j];
          }
          if (!vec_is_zero(row)) sys.push_back(std::move(row));
        }
  if (sys.empty()) {
    // dim V < 3: no Bianchi constraints.
    return Subspace<K>::from_vectors(cols, identity_mat<K>(cols));
  }
  return Subspace<K>::from_vectors(cols, kernel(std::move(sys)));
}

/// Cyclic Bianchi residual of R on all basis triples; zero iff R lies in K(h).
template <class K>
bool bianchi_member(const SpecialSymplecticData<K>& s, const CurvatureElement<K>& R) {
  std::size_t n = s.dimV;
  PairIndex pi(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec<K> acc(n, K(0));
        Mat<K> mij = s.h_matrix(R.at(pi, i, j));
        Mat<K> mjk = s.h_matrix(R.at(pi, j, k));
        Mat<K> mki = s.h_matrix(R.at(pi, k, i));
        for (std::size_t l = 0; l < n; ++l)
          acc[l] = mij[l][k] + mjk[l][i] + mki[l][j];
        if (!vec_is_zero(acc)) return false;
      }
  return true;
}

/// R_h(x,y) = 2 w(x,y) h + x o (hy) - y o (hx); lands in K(h) exactly.
template <class K>
CurvatureElement<K> embed_Rh(const SpecialSymplecticData<K>& s, const Vec<K>& h) {
  std::size_t n = s.dimV, m = s.dimH;
  PairIndex pi(n);
  CurvatureElement<K> R;
  R.dimV = n;
  R.dimH = m;
  R.table = zero_mat<K>(pi.count(), m);
  Mat<K> A = s.h_matrix(h);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vec<K> xi(n, K(0)), xj(n, K(0)), Axi(n, K(0)), Axj(n, K(0));
      xi[i] = K(1);
      xj[j] = K(1);
      for (std::size_t k = 0; k < n; ++k) {
        Axi[k] = A[k][i];
        Axj[k] = A[k][j];
      }
      Vec<K> val = vec_scale(h, K(2) * s.omega[i][j]);
      val = vec_add(std::move(val), s.circ_of(xi, Axj));
      val = vec_sub(std::move(val), s.circ_of(xj, Axi));
      R.table[pi.of(i, j)] = std::move(val);
    }
  return R;
}

/// Both Ricci evaluations: the trace form tr(R(x, .)y) and the omega
/// contraction -w(R(w^{-1})x, y). They must agree exactly.
template <class K>
struct RicciResult {
  Mat<K> trace_form;
  Mat<K> omega_form;
  bool agree = false;
  bool symmetric = false;
};

template <class K>
RicciResult<K> ricci(const SpecialSymplecticData<K>& s, const CurvatureElement<K>& R) {
  std::size_t n = s.dimV;
  PairIndex pi(n);
  RicciResult<K> out;
  out.trace_form = zero_mat<K>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      K acc(0);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        Mat<K> M = s.h_matrix(R.at(pi, i, k));
        acc += M[k][j];
      }
      out.trace_form[i][j] = acc;
    }
  // R(w^{-1}) = 1/2 sum_{kl} (-W^{-1})_{kl} R(x_k, x_l).
  Mat<K> Winv = mat_inverse(s.omega);
  Vec<K> rw(s.dimH, K(0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      if (k == l || is_zero(Winv[k][l])) continue;
      vec_axpy(rw, K(Rational(-1, 2)) * Winv[k][l], R.at(pi, k, l));
    }
  Mat<K> M = s.h_matrix(rw);
  out.omega_form = zero_mat<K>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      K acc(0);
      for (std::size_t k = 0; k < n; ++k) acc += M[k][i] * s.omega[k][j];
      out.omega_form[i][j] = -acc;
    }
  out.agree = (out.trace_form == out.omega_form);
  out.symmetric = true;
  for (std::size_t i = 0; i < n && out.symmetric; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (out.trace_form[i][j] != out.trace_form[j][i]) {
        out.symmetric = false;
        break;
      }
  return out;
}

/// K(h) = R_h-part (+) Ricci-flat part, all dimensions exact.
template <class K>
struct CurvatureDecomposition {
  Subspace<K> K_basis;
  Subspace<K> R_part;
  Subspace<K> W_part;
  std::size_t dim_K = 0, dim_R = 0, dim_W = 0;
};

template <class K>
CurvatureDecomposition<K> decompose(const SpecialSymplecticData<K>& s, const Subspace<K>& Ksub) {
  std::size_t n = s.dimV, m = s.dimH;
  CurvatureDecomposition<K> out;
  out.K_basis = Ksub;
  out.dim_K = Ksub.dim();

  Mat<K> r_vecs;
  for (std::size_t a = 0; a < m; ++a) {
    Vec<K> h(m, K(0));
    h[a] = K(1);
    auto R = embed_Rh(s, h);
    if (!bianchi_member(s, R))
      throw std::domain_error("decompose: R_h fails the Bianchi identity");
    Vec<K> flat = R.flatten();
    if (!Ksub.contains(flat)) throw std::domain_error("decompose: R_h outside K(h)");
    r_vecs.push_back(std::move(flat));
  }
  out.R_part = Subspace<K>::from_vectors(Ksub.ambient, std::move(r_vecs));
  out.dim_R = out.R_part.dim();
  if (out.dim_R != m) throw std::domain_error("decompose: h -> R_h not injective");

  // W = kernel of Ric on K, in K-coordinates.
  std::size_t dk = Ksub.dim();
  Mat<K> ric_map = zero_mat<K>(n * n, dk);
  for (std::size_t c = 0; c < dk; ++c) {
    auto R = CurvatureElement<K>::from_flat(n, m, Ksub.basis[c]);
    auto ric = ricci(s, R);
    if (!ric.agree) throw std::domain_error("decompose: Ricci routes disagree");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ric_map[i * n + j][c] = ric.trace_form[i][j];
  }
  Mat<K> null = kernel(std::move(ric_map));
  Mat<K> w_vecs;
  for (const auto& x : null) w_vecs.push_back(Ksub.from_coords(x));
  out.W_part = Subspace<K>::from_vectors(Ksub.ambient, std::move(w_vecs));
  out.dim_W = out.W_part.dim();
  if (out.dim_R + out.dim_W != out.dim_K)
    throw std::domain_error("decompose: K != R + W dimension split");
  if (intersect(out.R_part, out.W_part).dim() != 0)
    throw std::domain_error("decompose: R and W intersect");
  return out;
}

// ---------------------------------------------------------------------------
// Bi-Lagrangian correspondence (row-(i) data).
// ---------------------------------------------------------------------------

template <class K>
struct BiLagrangianSplit {
  Mat<K> W_basis;      // rows: vectors of V
  Mat<K> Wstar_basis;
};

/// Split V = W (+) W* by the center of h; requires a one-dimensional center
/// acting with two opposite eigenvalues and Lagrangian eigenspaces.
template <class K>
BiLagrangianSplit<K> bilagrangian_split(const SpecialSymplecticData<K>& s) {
  std::size_t m = s.dimH, n = s.dimV;
  // Center of h: [c, h_b] = 0 for all b.
  Mat<K> sys = zero_mat<K>(m * m, m);
  for (std::size_t p = 0; p < m; ++p) {
    Vec<K> ep(m, K(0));
    ep[p] = K(1);
    for (std::size_t b = 0; b < m; ++b) {
      Vec<K> eb(m, K(0));
      eb[b] = K(1);
      Vec<K> br = s.h_bracket(ep, eb);
      for (std::size_t q = 0; q < m; ++q) sys[b * m + q][p] = br[q];
    }
  }
  Mat<K> center = kernel(std::move(sys));
  if (center.size() != 1)
    throw std::domain_error("bilagrangian_split: center of h is not one dimensional");
  Mat<K> Z = s.h_matrix(center[0]);
  // Eigenvalue t from Z^2 = t^2 Id.
  Mat<K> Z2 = mat_mul(Z, Z);
  K t2 = Z2[0][0];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (Z2[i][j] != (i == j ? t2 : K(0)))
        throw std::domain_error("bilagrangian_split: center action not scalar-squared");
  K t = K(exact_sqrt(real_part(t2)));
  if (is_zero(t)) throw std::domain_error("bilagrangian_split: nilpotent center action");
  BiLagrangianSplit<K> out;
  for (int sgn : {+1, -1}) {
    Mat<K> shifted = Z;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= K(sgn) * t;
    Mat<K> null = kernel(std::move(shifted));
    if (sgn > 0)
      out.W_basis = std::move(null);
    else
      out.Wstar_basis = std::move(null);
  }
  if (out.W_basis.size() != n / 2 || out.Wstar_basis.size() != n / 2)
    throw std::domain_error("bilagrangian_split: eigenspaces not half dimensional");
  for (const auto& a : out.W_basis)
    for (const auto& b : out.W_basis)
      if (!is_zero(s.omega_of(a, b)))
        throw std::domain_error("bilagrangian_split: W not Lagrangian");
  for (const auto& a : out.Wstar_basis)
    for (const auto& b : out.Wstar_basis)
      if (!is_zero(s.omega_of(a, b)))
        throw std::domain_error("bilagrangian_split: W* not Lagrangian");
  return out;
}

template <class K>
struct SigmaTensor {
  std::size_t nW = 0;
  // sigma[(x,y)][(zbar,wbar)] over symmetric pair indices; symmetry verified.
  Mat<K> values;
  bool symmetric_xy = true, symmetric_zw = true, lagrangian_vanishing = true;
};

/// sigma_R(x, y, zbar, wbar) = wbar(R(zbar, x) y) for row-(i) data; R must
/// kill W x W and W* x W*.
template <class K>
SigmaTensor<K> sigma_correspondence(const SpecialSymplecticData<K>& s,
                                    const BiLagrangianSplit<K>& split,
                                    const CurvatureElement<K>& R) {
  std::size_t n = s.dimV;
  std::size_t nw = split.W_basis.size();
  PairIndex pi(n);
  SigmaTensor<K> out;
  out.nW = nw;

  auto Rval = [&](const Vec<K>& u, const Vec<K>& v) {
    Vec<K> acc(s.dimH, K(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (is_zero(u[i])) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (is_zero(v[j]) || i == j) continue;
        vec_axpy(acc, u[i] * v[j], R.at(pi, i, j));
      }
    }
    return acc;
  };

  for (std::size_t a = 0; a < nw; ++a)
    for (std::size_t b = 0; b < nw; ++b) {
      if (!vec_is_zero(Rval(split.W_basis[a], split.W_basis[b]))) out.lagrangian_vanishing = false;
      if (!vec_is_zero(Rval(split.Wstar_basis[a], split.Wstar_basis[b])))
        out.lagrangian_vanishing = false;
    }

  // wbar(w) := omega(wbar, w).
  auto eval = [&](std::size_t x, std::size_t y, std::size_t zb, std::size_t wb) {
    Vec<K> h = Rval(split.Wstar_basis[zb], split.W_basis[x]);
    Mat<K> M = s.h_matrix(h);
    Vec<K> img = mat_vec(M, split.W_basis[y]);
    return s.omega_of(split.Wstar_basis[wb], img);
  };

  std::size_t sym = nw * (nw + 1) / 2;
  out.values = zero_mat<K>(sym, sym);
  std::size_t row = 0;
  for (std::size_t x = 0; x < nw; ++x)
    for (std::size_t y = x; y < nw; ++y, ++row) {
      std::size_t col = 0;
      for (std::size_t zb = 0; zb < nw; ++zb)
        for (std::size_t wb = zb; wb < nw; ++wb, ++col) {
          K v = eval(x, y, zb, wb);
          if (eval(y, x, zb, wb) != v) out.symmetric_xy = false;
          if (eval(x, y, wb, zb) != v) out.symmetric_zw = false;
          out.values[row][col] = v;
        }
    }
  return out;
}

/// Rank of the map R -> sigma_R over a basis of K(h); equals dim S^2W (x)
/// S^2W* exactly when the correspondence is bijective.
template <class K>
std::size_t sigma_rank(const SpecialSymplecticData<K>& s, const BiLagrangianSplit<K>& split,
                       const Subspace<K>& Ksub) {
  Mat<K> rows;
  for (const auto& flat : Ksub.basis) {
    auto R = CurvatureElement<K>::from_flat(s.dimV, s.dimH, flat);
    auto sig = sigma_correspondence(s, split, R);
    Vec<K> v;
    for (const auto& r : sig.values)
      for (const auto& c : r) v.push_back(c);
    rows.push_back(std::move(v));
  }
  return rank(std::move(rows));
}

// ---------------------------------------------------------------------------
// Prolongation and the Schur-type solution space.
// ---------------------------------------------------------------------------

template <class K>
struct ProlongationSpace {
  // psi stored as [i][a]: psi(x_i) = R_{h} with h-coords in the second slot.
  Subspace<K> basis;          // ambient n*m
  std::size_t psi_span_dim = 0;
  bool psi_contained = true;  // span{psi_u} inside the basis space
};

template <class K>
ProlongationSpace<K> prolongation(const SpecialSymplecticData<K>& s,
                                  const CurvatureBudget& budget = {}) {
  check_budget(s, budget);
  std::size_t n = s.dimV, m = s.dimH;
  PairIndex pi(n);
  // Precompute, per pair (j<k), the m x m matrix h -> h-coords of R_h(x_j,x_k).
  std::vector<Mat<K>> rmat(pi.count());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      Mat<K> M = zero_mat<K>(m, m);
      for (std::size_t a = 0; a < m; ++a) {
        Vec<K> h(m, K(0));
        h[a] = K(1);
        auto R = embed_Rh(s, h);
        Vec<K> col = R.table[pi.of(j, k)];
        for (std::size_t q = 0; q < m; ++q) M[q][a] = col[q];
      }
      rmat[pi.of(j, k)] = std::move(M);
    }

  Mat<K> sys;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t q = 0; q < m; ++q) {
          Vec<K> row(n * m, K(0));
          for (std::size_t a = 0; a < m; ++a) {
            row[i * m + a] += rmat[pi.of(j, k)][q][a];
            row[j * m + a] -= rmat[pi.of(i, k)][q][a];  // R_{psi(x_j)}(x_k,x_i)
            row[k * m + a] += rmat[pi.of(i, j)][q][a];
          }
          if (!vec_is_zero(row)) sys.push_back(std::move(row));
        }
  ProlongationSpace<K> out;
  out.basis = sys.empty() ? Subspace<K>::from_vectors(n * m, identity_mat<K>(n * m))
                          : Subspace<K>::from_vectors(n * m, kernel(std::move(sys)));

  Mat<K> psi_rows;
  for (std::size_t t = 0; t < n; ++t) {
    Vec<K> row(n * m, K(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < m; ++a) row[i * m + a] = s.circ[t][i][a];
    if (!out.basis.contains(row)) out.psi_contained = false;
    psi_rows.push_back(std::move(row));
  }
  out.psi_span_dim = rank(std::move(psi_rows));
  return out;
}

/// Exact solution space of phi(x) o y = phi(y) o x inside End(V).
template <class K>
Subspace<K> schur_space(const SpecialSymplecticData<K>& s) {
  std::size_t n = s.dimV, m = s.dimH;
  // unknowns phi[k][i] flattened as k*n + i
  Mat<K> sys;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t a = 0; a < m; ++a) {
        Vec<K> row(n * n, K(0));
        for (std::size_t k = 0; k < n; ++k) {
          row[k * n + i] += s.circ[k][j][a];
          row[k * n + j] -= s.circ[k][i][a];
        }
        if (!vec_is_zero(row)) sys.push_back(std::move(row));
      }
  if (sys.empty()) return Subspace<K>::from_vectors(n * n, identity_mat<K>(n * n));
  return Subspace<K>::from_vectors(n * n, kernel(std::move(sys)));
}

}  // namespace sympcon
