#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sympcon/curvature.hpp"
#include "sympcon/grading.hpp"
#include "sympcon/liecore.hpp"
#include "sympcon/sympdata.hpp"

namespace sympcon {

/// A constructed algebra together with the canonical maximal-root seed used
/// for its 2-grading.
struct AlgebraBundle {
  LieAlgebra<Rational> L;
  std::optional<RootSystem> rs;  // present for Chevalley forms
  Vec<Rational> seed;
  std::string family;  // canonical spec string, e.g. "sp_real:2"
  int rank = 0;
};

namespace families {

inline Mat<Gaussian> unit_matrix(std::size_t n, std::size_t i, std::size_t j,
                                 Gaussian v = Gaussian(1)) {
  Mat<Gaussian> m = zero_mat<Gaussian>(n, n);
  m[i][j] = v;
  return m;
}

/// sl(n, R): diagonal H_i = E_ii - E_{i+1,i+1} then off-diagonal E_ij.
inline AlgebraBundle sl_real(int n) {
  if (n < 2) throw std::invalid_argument("sl_real: n >= 2 required");
  std::size_t N = n;
  std::vector<Mat<Gaussian>> basis;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
    m[i][i] = Gaussian(1);
    m[i + 1][i + 1] = Gaussian(-1);
    basis.push_back(std::move(m));
    labels.push_back("H" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      basis.push_back(unit_matrix(N, i, j));
      labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  AlgebraBundle b;
  b.L = algebra_from_matrices(std::move(basis), std::move(labels),
                              "sl(" + std::to_string(n) + ",R)");
  b.family = "sl_real:" + std::to_string(n);
  b.rank = n - 1;
  b.seed = model_coords_of(b.L, unit_matrix(N, 0, N - 1));  // rank-one E_{1n}
  return b;
}

/// sp(n, R) on 2n x 2n matrices, symplectic form S = [[0,I],[-I,0]].
inline AlgebraBundle sp_real(int n) {
  if (n < 1) throw std::invalid_argument("sp_real: n >= 1 required");
  std::size_t N = 2 * static_cast<std::size_t>(n);
  std::vector<Mat<Gaussian>> basis;
  std::vector<std::string> labels;
  auto push = [&](Mat<Gaussian> m, std::string l) {
    basis.push_back(std::move(m));
    labels.push_back(std::move(l));
  };
  std::size_t nn = n;
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t b = 0; b < nn; ++b) {
      Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
      m[a][b] = Gaussian(1);
      m[nn + b][nn + a] = Gaussian(-1);
      push(std::move(m), "A" + std::to_string(a + 1) + std::to_string(b + 1));
    }
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t b = a; b < nn; ++b) {
      Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
      m[a][nn + b] = Gaussian(1);
      m[b][nn + a] = Gaussian(1);
      push(std::move(m), "B" + std::to_string(a + 1) + std::to_string(b + 1));
      Mat<Gaussian> c = zero_mat<Gaussian>(N, N);
      c[nn + a][b] = Gaussian(1);
      c[nn + b][a] = Gaussian(1);
      push(std::move(c), "C" + std::to_string(a + 1) + std::to_string(b + 1));
    }
  AlgebraBundle b;
  b.L = algebra_from_matrices(std::move(basis), std::move(labels),
                              "sp(" + std::to_string(2 * n) + ",R)");
  b.family = "sp_real:" + std::to_string(n);
  b.rank = n;
  // seed = e1 o e1 = 2 E_{1,n+1}
  b.seed = model_coords_of(b.L, unit_matrix(N, 0, nn, Gaussian(2)));
  return b;
}

/// su(p, q) realified: real algebra of dimension (p+q)^2 - 1 with Gaussian
/// matrix entries, eta = diag(1_p, -1_q).
inline AlgebraBundle su(int p, int q) {
  if (p < 0 || q < 0 || p + q < 2) throw std::invalid_argument("su: need p+q >= 2");
  std::size_t N = p + q;
  auto eta = [&](std::size_t j) { return j < static_cast<std::size_t>(p) ? 1 : -1; };
  std::vector<Mat<Gaussian>> basis;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j + 1 < N; ++j) {
    Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
    m[j][j] = Gaussian::i();
    m[j + 1][j + 1] = -Gaussian::i();
    basis.push_back(std::move(m));
    labels.push_back("D" + std::to_string(j + 1));
  }
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = j + 1; k < N; ++k) {
      Gaussian sigma(Rational(eta(j) * eta(k)));
      Mat<Gaussian> f1 = zero_mat<Gaussian>(N, N);
      f1[k][j] = Gaussian(1);
      f1[j][k] = -sigma;
      basis.push_back(std::move(f1));
      labels.push_back("F" + std::to_string(j + 1) + std::to_string(k + 1));
      Mat<Gaussian> f2 = zero_mat<Gaussian>(N, N);
      f2[k][j] = Gaussian::i();
      f2[j][k] = sigma * Gaussian::i();
      basis.push_back(std::move(f2));
      labels.push_back("G" + std::to_string(j + 1) + std::to_string(k + 1));
    }
  AlgebraBundle b;
  b.L = algebra_from_matrices(std::move(basis), std::move(labels),
                              "su(" + std::to_string(p) + "," + std::to_string(q) + ")");
  b.family = "su:" + std::to_string(p) + "," + std::to_string(q);
  b.rank = static_cast<int>(N) - 1;
  if (p < 1 || q < 1) throw std::invalid_argument("su: maximal root elements need p,q >= 1");
  // Seed i x x^dagger eta for the first null vector x = e_1 + e_{p+1}.
  Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
  std::size_t u = 0, v = p;
  m[u][u] = Gaussian::i();
  m[u][v] = -Gaussian::i();
  m[v][u] = Gaussian::i();
  m[v][v] = -Gaussian::i();
  b.seed = model_coords_of(b.L, m);
  return b;
}

/// so(p, q): eta * (antisymmetric), basis eta(E_jk - E_kj).
inline AlgebraBundle so_real(int p, int q) {
  if (p < 0 || q < 0 || p + q < 3) throw std::invalid_argument("so_real: need p+q >= 3");
  std::size_t N = p + q;
  auto eta = [&](std::size_t j) { return j < static_cast<std::size_t>(p) ? 1 : -1; };
  std::vector<Mat<Gaussian>> basis;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = j + 1; k < N; ++k) {
      Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
      m[j][k] = Gaussian(Rational(eta(j)));
      m[k][j] = Gaussian(Rational(-eta(k)));
      basis.push_back(std::move(m));
      labels.push_back("M" + std::to_string(j + 1) + std::to_string(k + 1));
    }
  AlgebraBundle b;
  b.L = algebra_from_matrices(std::move(basis), std::move(labels),
                              "so(" + std::to_string(p) + "," + std::to_string(q) + ")");
  b.family = "so_real:" + std::to_string(p) + "," + std::to_string(q);
  b.rank = static_cast<int>(N / 2);
  if (p < 2 || q < 2) throw std::invalid_argument("so_real: maximal root elements need p,q >= 2");
  // Seed x (eta y)^T - y (eta x)^T for the isotropic pair
  // x = e_1 + e_{p+1}, y = e_2 + e_{p+2}.
  std::size_t x1 = 0, x2 = p, y1 = 1, y2 = p + 1;
  Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
  auto add = [&](std::size_t r, std::size_t c, int v) { m[r][c] += Gaussian(Rational(v)); };
  // x (eta y)^T with eta y = e_2 - e_{p+2}
  add(x1, y1, 1);
  add(x1, y2, -1);
  add(x2, y1, 1);
  add(x2, y2, -1);
  // - y (eta x)^T with eta x = e_1 - e_{p+1}
  add(y1, x1, -1);
  add(y1, x2, 1);
  add(y2, x1, -1);
  add(y2, x2, 1);
  b.seed = model_coords_of(b.L, m);
  return b;
}

inline AlgebraBundle chevalley(RootKind kind, int rank) {
  AlgebraBundle b;
  b.rs = build_root_system(kind, rank);
  b.L = chevalley_algebra(*b.rs);
  b.rank = b.rs->rank;
  b.family = "chevalley:" + kind_name(kind) + "," + std::to_string(b.rs->rank);
  if (kind == RootKind::G2) b.family = "g2_split";
  if (kind == RootKind::F4) b.family = "f4_split";
  b.seed = zero_vec<Rational>(b.L.dim);
  b.seed[b.rs->rank + b.rs->highest_root()] = Rational(1);
  return b;
}

}  // namespace families

/// Parse "sl_real:3", "su:2,2", "sp_real:2", "so_real:2,3", "g2_split",
/// "f4_split", "chevalley:K,R". E-series Chevalley forms are constructible
/// but cost-gated behind allow_eseries.
inline AlgebraBundle build_algebra(const std::string& spec, bool allow_eseries = false) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto split_ints = [&](std::size_t expect) {
    std::vector<int> out;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.size() != expect)
      throw std::invalid_argument("algebra spec '" + spec + "': expected " +
                                  std::to_string(expect) + " parameter(s)");
    return out;
  };
  if (head == "sl_real") return families::sl_real(split_ints(1)[0]);
  if (head == "sp_real") return families::sp_real(split_ints(1)[0]);
  if (head == "su") {
    auto v = split_ints(2);
    return families::su(v[0], v[1]);
  }
  if (head == "so_real") {
    auto v = split_ints(2);
    return families::so_real(v[0], v[1]);
  }
  if (head == "g2_split") return families::chevalley(RootKind::G2, 2);
  if (head == "f4_split") return families::chevalley(RootKind::F4, 4);
  if (head == "chevalley") {
    std::stringstream ss(args);
    std::string kind, rk;
    if (!std::getline(ss, kind, ',') || !std::getline(ss, rk))
      throw std::invalid_argument("chevalley spec needs KIND,RANK");
    if ((kind == "E6" || kind == "E7" || kind == "E8" || kind == "E") && !allow_eseries)
      throw std::invalid_argument("E-series forms are gated; pass --enable-eseries");
    if (kind == "E") kind = "E" + rk;
    return families::chevalley(build_root_system(kind, std::stoi(rk)).kind, std::stoi(rk));
  }
  throw std::invalid_argument("unknown algebra family: " + spec);
}

// ---------------------------------------------------------------------------
// Momenta.
// ---------------------------------------------------------------------------

/// diag((q+1)i, ..., -(p+1)i, ...) in su(p+1, q+1).
inline Vec<Rational> momentum_bochner(const AlgebraBundle& b, int p, int q) {
  if (b.family != "su:" + std::to_string(p + 1) + "," + std::to_string(q + 1))
    throw std::invalid_argument("bochner momentum requires algebra su:" + std::to_string(p + 1) +
                                "," + std::to_string(q + 1));
  std::size_t N = p + q + 2;
  Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
  for (std::size_t j = 0; j < N; ++j) {
    long v = j < static_cast<std::size_t>(p + 1) ? (q + 1) : -(p + 1);
    m[j][j] = Gaussian(Rational(0), Rational(v));
  }
  return model_coords_of(b.L, m);
}

/// c J in sp(n, R) with J the standard positive compatible complex structure.
inline Vec<Rational> momentum_ricci(const AlgebraBundle& b, const Rational& c) {
  if (b.family.rfind("sp_real:", 0) != 0)
    throw std::invalid_argument("ricci momentum requires an sp_real algebra");
  if (c <= 0) throw std::invalid_argument("ricci momentum needs c > 0");
  std::size_t N = b.L.model->N, n = N / 2;
  Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
  for (std::size_t k = 0; k < n; ++k) {
    m[k][n + k] = Gaussian(c);
    m[n + k][k] = Gaussian(-c);
  }
  return model_coords_of(b.L, m);
}

enum class Rho0Kind { Zero, ComplexStructure };

/// The h-block element acting as a positive compatible complex structure
/// scaled to square to -c^2; returned in algebra coordinates.
inline Vec<Rational> canonical_rho0(const AlgebraBundle& b, const TwoGrading<Rational>& tg,
                                    const SpecialSymplecticData<Rational>& ssd,
                                    const Rational& c) {
  std::size_t m = ssd.dimH, n = ssd.dimV;
  if (m == 0) throw std::invalid_argument("canonical_rho0: h-block is trivial");
  Vec<Rational> z_h;  // candidate in h coordinates
  if (b.family.rfind("su:", 0) == 0) {
    // i diag(1_p, -1_q) on the complement of the (u_1, v_1) hyperbolic plane,
    // balanced by a scalar on that plane so the element commutes with the
    // sl2 block and stays traceless.
    auto colon = b.family.find(':');
    auto comma = b.family.find(',', colon);
    int P = std::stoi(b.family.substr(colon + 1, comma - colon - 1));
    int Q = std::stoi(b.family.substr(comma + 1));
    std::size_t N = b.L.model->N;
    Mat<Gaussian> zm = zero_mat<Gaussian>(N, N);
    Rational t(Q - 1 - (P - 1), 2);  // balances the trace of i diag(1_{p}, -1_{q})
    zm[0][0] = Gaussian(Rational(0), t);
    zm[P][P] = Gaussian(Rational(0), t);
    for (int j = 1; j < P; ++j) zm[j][j] = Gaussian::i();
    for (int j = P + 1; j < P + Q; ++j) zm[j][j] = -Gaussian::i();
    Vec<Rational> coords = model_coords_of(b.L, zm);
    auto hc = tg.h_block.coords_of(coords);
    if (!hc) throw std::invalid_argument("canonical_rho0: su candidate not in the h-block");
    z_h = *hc;
  } else if (b.family.rfind("sp_real:", 0) == 0) {
    // J on the complementary symplectic block, expressed through the model.
    std::size_t N = b.L.model->N, half = N / 2;
    Mat<Gaussian> jm = zero_mat<Gaussian>(N, N);
    for (std::size_t k = 1; k < half; ++k) {
      jm[k][half + k] = Gaussian(1);
      jm[half + k][k] = Gaussian(-1);
    }
    Vec<Rational> coords = model_coords_of(b.L, jm);
    auto hc = tg.h_block.coords_of(coords);
    if (!hc) throw std::invalid_argument("canonical_rho0: block J not in the h-block");
    z_h = *hc;
  } else {
    throw std::invalid_argument("canonical_rho0: unsupported family " + b.family);
  }
  // Scale so that the action squares to -c^2 Id and w(rho0 x, x) > 0.
  Mat<Rational> A = ssd.h_matrix(z_h);
  Mat<Rational> A2 = mat_mul(A, A);
  Rational t2 = -A2[0][0];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (A2[i][j] != (i == j ? -t2 : Rational(0)))
        throw std::invalid_argument("canonical_rho0: candidate does not square to a scalar");
  Rational t = exact_sqrt(t2);
  Vec<Rational> rho0_h = vec_scale(z_h, c / t);
  // positivity of w(rho0 x, x): flip sign if needed, then verify definiteness
  Mat<Rational> R = ssd.h_matrix(rho0_h);
  Mat<Rational> Gm = zero_mat<Rational>(n, n);  // Gm[i][j] = w(rho0 x_i, x_j)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational acc(0);
      for (std::size_t k = 0; k < n; ++k) acc += R[k][i] * ssd.omega[k][j];
      Gm[i][j] = acc;
    }
  if (Gm[0][0] < 0) {
    rho0_h = vec_scale(std::move(rho0_h), Rational(-1));
    for (auto& row : Gm)
      for (auto& x : row) x = -x;
  }
  // Sylvester criterion on the symmetric matrix Gm.
  for (std::size_t k = 1; k <= n; ++k) {
    Mat<Rational> minor(k, Vec<Rational>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor[i][j] = Gm[i][j];
    // determinant by elimination
    Rational det(1);
    for (std::size_t col = 0; col < k; ++col) {
      std::size_t piv = col;
      while (piv < k && is_zero(minor[piv][col])) ++piv;
      if (piv == k) {
        det = 0;
        break;
      }
      if (piv != col) {
        std::swap(minor[piv], minor[col]);
        det = -det;
      }
      det *= minor[col][col];
      for (std::size_t r = col + 1; r < k; ++r) {
        Rational f = minor[r][col] / minor[col][col];
        for (std::size_t cc = col; cc < k; ++cc) minor[r][cc] -= f * minor[col][cc];
      }
    }
    if (det <= 0)
      throw std::invalid_argument("canonical_rho0: w(rho0 x, x) not positive definite");
  }
  // back to algebra coordinates
  Vec<Rational> out = zero_vec<Rational>(b.L.dim);
  for (std::size_t a = 0; a < m; ++a) vec_axpy(out, rho0_h[a], tg.h_block.basis[a]);
  return out;
}

/// a = c/2 (e_+^2 + e_-^2) + rho0 in algebra coordinates.
inline Vec<Rational> momentum_normal_form(const AlgebraBundle& b, const TwoGrading<Rational>& tg,
                                          const SpecialSymplecticData<Rational>& ssd,
                                          const Rational& c, Rho0Kind kind) {
  Vec<Rational> a = zero_vec<Rational>(b.L.dim);
  vec_axpy(a, c / 2, tg.X);
  vec_axpy(a, c / 2, tg.Y);
  if (kind == Rho0Kind::ComplexStructure) {
    Vec<Rational> rho0 = canonical_rho0(b, tg, ssd, c);
    a = vec_add(std::move(a), rho0);
  }
  return a;
}

/// Deterministic pseudo-random momentum inside the affine slice
/// Q = 1/2 e_-^2 + h + g^1 + g^2: a = 1/2 e_-^2 + rho + e_+ (x) u + 1/2 f e_+^2
/// with small exact rational components. The identity then lies on Gamma_a,
/// and generically none of the structure equations degenerate along it.
inline Vec<Rational> momentum_q_generic(const AlgebraBundle& b, const TwoGrading<Rational>& tg,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-8, 8);
  auto draw = [&] {
    int v = dist(rng);
    return Rational(v == 0 ? 3 : v, 8);
  };
  Vec<Rational> a = zero_vec<Rational>(b.L.dim);
  vec_axpy(a, Rational(1, 2), tg.Y);
  for (const auto& h : tg.h_block.basis) vec_axpy(a, draw(), h);
  for (const auto& v : tg.V_basis) vec_axpy(a, draw(), v);
  vec_axpy(a, draw() / 2, tg.X);
  return a;
}

/// Random regular element of a split/compact Cartan subalgebra; exact
/// rational coordinates, redrawn until the centralizer has dimension rank.
inline Vec<Rational> momentum_random_cartan(const AlgebraBundle& b, std::uint64_t seed) {
  if (!b.L.model) throw std::invalid_argument("random cartan momentum needs a matrix model");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(1, 19);
  std::size_t N = b.L.model->N;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mat<Gaussian> m = zero_mat<Gaussian>(N, N);
    if (b.family.rfind("sl_real:", 0) == 0) {
      long trace = 0;
      for (std::size_t j = 0; j + 1 < N; ++j) {
        int v = dist(rng);
        m[j][j] = Gaussian(Rational(v));
        trace += v;
      }
      m[N - 1][N - 1] = Gaussian(Rational(-trace));
    } else if (b.family.rfind("su:", 0) == 0) {
      long trace = 0;
      for (std::size_t j = 0; j + 1 < N; ++j) {
        int v = dist(rng);
        m[j][j] = Gaussian(Rational(0), Rational(v));
        trace += v;
      }
      m[N - 1][N - 1] = Gaussian(Rational(0), Rational(-trace));
    } else if (b.family.rfind("sp_real:", 0) == 0) {
      std::size_t half = N / 2;
      for (std::size_t j = 0; j < half; ++j) {
        int v = dist(rng);
        m[j][j] = Gaussian(Rational(v));
        m[half + j][half + j] = Gaussian(Rational(-v));
      }
    } else {
      throw std::invalid_argument("random cartan momentum unsupported for " + b.family);
    }
    Vec<Rational> a = model_coords_of(b.L, m);
    if (centralizer(b.L, a).dim() == static_cast<std::size_t>(b.rank)) return a;
  }
  throw std::runtime_error("momentum_random_cartan: no regular draw found");
}

/// Cartan subalgebra of the h-block (h coordinates) for the weight audit:
/// t cap h for Chevalley forms, the diagonal part of h for matrix models.
inline std::vector<Vec<Rational>> cartan_of_h(const AlgebraBundle& b,
                                              const TwoGrading<Rational>& tg) {
  Subspace<Rational> diag_like(b.L.dim);
  if (b.rs) {
    Mat<Rational> rows;
    for (int i = 0; i < b.rs->rank; ++i) rows.push_back(b.L.basis_vector(i));
    diag_like = Subspace<Rational>::from_vectors(b.L.dim, std::move(rows));
  } else {
    Mat<Rational> rows;
    for (std::size_t i = 0; i < b.L.dim; ++i) {
      bool diag = true;
      const auto& mm = b.L.model->basis[i];
      for (std::size_t r = 0; r < mm.size() && diag; ++r)
        for (std::size_t c = 0; c < mm.size(); ++c)
          if (r != c && !is_zero(mm[r][c])) {
            diag = false;
            break;
          }
      if (diag) rows.push_back(b.L.basis_vector(i));
    }
    diag_like = Subspace<Rational>::from_vectors(b.L.dim, std::move(rows));
  }
  Subspace<Rational> cart = intersect(diag_like, tg.h_block);
  std::vector<Vec<Rational>> out;
  for (const auto& v : cart.basis) {
    auto hc = tg.h_block.coords_of(v);
    if (!hc) throw std::logic_error("cartan_of_h: intersection escaped the h-block");
    out.push_back(*hc);
  }
  return out;
}

/// dim stab(a) - 1; the symmetry algebra of the induced connection is
/// stab(a)/(F a).
inline long symmetry_dimension(const LieAlgebra<Rational>& L, const Vec<Rational>& a) {
  if (vec_is_zero(a)) throw std::invalid_argument("symmetry_dimension: zero momentum rejected");
  return static_cast<long>(centralizer(L, a).dim()) - 1;
}

struct StabReport {
  std::size_t stab_dim = 0;
  long sym_dim = 0;
  bool normal_form_checked = false;
  std::size_t dim_k = 0;   // {h in h : [h, rho0] = 0}
  std::size_t dim_V = 0;
  bool consistent = false;  // stab_dim == 1 + dim_k + dim_V
};

/// Stabilizer dimensions, with the decomposition check
/// stab(a) = R a (+) k (+) { c(e+ (x) x) - (e- (x) rho0 x) } for normal-form
/// momenta with rho0^2 = -c^2 Id.
inline StabReport stabilizer_report(const AlgebraBundle& b, const TwoGrading<Rational>& tg,
                                    const SpecialSymplecticData<Rational>& ssd,
                                    const Vec<Rational>& a,
                                    const std::optional<Vec<Rational>>& rho0_h = std::nullopt) {
  StabReport rep;
  rep.stab_dim = centralizer(b.L, a).dim();
  rep.sym_dim = static_cast<long>(rep.stab_dim) - 1;
  rep.dim_V = ssd.dimV;
  if (rho0_h) {
    rep.normal_form_checked = true;
    std::size_t m = ssd.dimH;
    Mat<Rational> sys = zero_mat<Rational>(m, m);
    for (std::size_t p = 0; p < m; ++p) {
      Vec<Rational> ep = zero_vec<Rational>(m);
      ep[p] = 1;
      Vec<Rational> br = ssd.h_bracket(ep, *rho0_h);
      for (std::size_t q = 0; q < m; ++q) sys[q][p] = br[q];
    }
    rep.dim_k = kernel(std::move(sys)).size();
    rep.consistent = (rep.stab_dim == 1 + rep.dim_k + rep.dim_V);
  }
  return rep;
}

}  // namespace sympcon
