#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sympcon/grading.hpp"

namespace sympcon {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string witness;  // indices + exact values when pass == false
};

struct CheckReport {
  std::vector<CheckResult> checks;
  void add(std::string name, bool pass, std::string witness = "") {
    checks.push_back({std::move(name), pass, std::move(witness)});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return c.name + (c.witness.empty() ? "" : (": " + c.witness));
    return "";
  }
};

struct structural_fault : std::domain_error {
  CheckReport report;
  explicit structural_fault(const CheckReport& r)
      : std::domain_error("structural fault: " + r.first_failure()), report(r) {}
};

/// The module V with its symplectic form, circle product, h-action and the
/// normalized invariant form, extracted from a normalized TwoGrading.
template <class K = Rational>
struct SpecialSymplecticData {
  std::size_t dimV = 0, dimH = 0;
  Mat<K> omega;                              // omega[i][j] = w(x_i, x_j)
  std::vector<std::vector<Vec<K>>> circ;     // circ[i][j] = h-coords of x_i o x_j
  std::vector<Mat<K>> h_action;              // action of h_a on V
  std::vector<std::vector<Vec<K>>> h_struct; // [h_a, h_b] in h-coords
  Mat<K> inner_h;                            // ( , ) on the h-block
  Mat<K> killing_h_sub;                      // Killing form of h as an algebra
  K inner_scale;                             // -1/(2(dim V + 4))
  std::string algebra_name;

  Vec<K> circ_of(const Vec<K>& x, const Vec<K>& y) const {
    Vec<K> out(dimH, K(0));
    for (std::size_t i = 0; i < dimV; ++i) {
      if (is_zero(x[i])) continue;
      for (std::size_t j = 0; j < dimV; ++j) {
        if (is_zero(y[j])) continue;
        vec_axpy(out, x[i] * y[j], circ[i][j]);
      }
    }
    return out;
  }

  Mat<K> h_matrix(const Vec<K>& h) const {
    Mat<K> m = zero_mat<K>(dimV, dimV);
    for (std::size_t a = 0; a < dimH; ++a) {
      if (is_zero(h[a])) continue;
      for (std::size_t i = 0; i < dimV; ++i)
        for (std::size_t j = 0; j < dimV; ++j) m[i][j] += h[a] * h_action[a][i][j];
    }
    return m;
  }

  Vec<K> h_bracket(const Vec<K>& a, const Vec<K>& b) const {
    Vec<K> out(dimH, K(0));
    for (std::size_t p = 0; p < dimH; ++p) {
      if (is_zero(a[p])) continue;
      for (std::size_t q = 0; q < dimH; ++q) {
        if (is_zero(b[q])) continue;
        if (p == q) continue;
        vec_axpy(out, a[p] * b[q], h_struct[p][q]);
      }
    }
    return out;
  }

  K omega_of(const Vec<K>& x, const Vec<K>& y) const {
    K s(0);
    for (std::size_t i = 0; i < dimV; ++i)
      if (!is_zero(x[i]))
        for (std::size_t j = 0; j < dimV; ++j)
          if (!is_zero(y[j])) s += x[i] * omega[i][j] * y[j];
    return s;
  }

  K inner_of(const Vec<K>& a, const Vec<K>& b) const {
    K s(0);
    for (std::size_t p = 0; p < dimH; ++p)
      if (!is_zero(a[p]))
        for (std::size_t q = 0; q < dimH; ++q)
          if (!is_zero(b[q])) s += a[p] * inner_h[p][q] * b[q];
    return s;
  }
};

namespace detail {

template <class K>
std::string witness2(std::size_t i, std::size_t j, const K& lhs, const K& rhs) {
  std::ostringstream os;
  os << "(" << i << "," << j << "): " << to_string(lhs) << " != " << to_string(rhs);
  return os.str();
}

}  // namespace detail

/// Extraction plus the full identity battery. Never trusts the construction:
/// every item of the invariant-form proposition and both product identities
/// are re-verified exactly before the data is returned.
template <class K>
std::pair<SpecialSymplecticData<K>, CheckReport> extract_checked(const LieAlgebra<K>& L,
                                                                 const TwoGrading<K>& tg) {
  SpecialSymplecticData<K> s;
  CheckReport rep;
  s.dimV = tg.dimV();
  s.dimH = tg.dimH();
  s.algebra_name = L.name;
  s.inner_scale = K(1) / K(Rational(-2) * Rational(static_cast<long>(s.dimV) + 4));

  auto fv = tg.frame_vectors();
  Mat<K> F = mat_transpose(fv);
  Mat<K> Finv = mat_inverse(F);
  auto frame_coords = [&](const Vec<K>& v) { return mat_vec(Finv, v); };
  // frame layout: 0=X, 1=H, 2=Y, [3, 3+m) = h, then v, then m
  std::size_t m = s.dimH, n = s.dimV;
  std::size_t off_h = 3, off_v = 3 + m, off_m = 3 + m + n;

  auto inner_g = [&](const Vec<K>& a, const Vec<K>& b) {
    return s.inner_scale * L.killing_form(a, b);
  };

  // omega and circle product from the mixed brackets.
  s.omega = zero_mat<K>(n, n);
  s.circ.assign(n, std::vector<Vec<K>>(n, Vec<K>(m, K(0))));
  bool pure_blocks = true;
  std::string pure_witness;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i < j) {
        Vec<K> c = frame_coords(L.bracket(tg.V_basis[i], tg.V_basis[j]));
        s.omega[i][j] = c[0];
        s.omega[j][i] = -c[0];
        c[0] = K(0);
        if (!vec_is_zero(c) && pure_blocks) {
          pure_blocks = false;
          pure_witness = "[v_" + std::to_string(i) + ", v_" + std::to_string(j) + "] escapes g^2";
        }
      }
      Vec<K> c = frame_coords(L.bracket(tg.V_basis[i], tg.minus_partner[j]));
      for (std::size_t a = 0; a < m; ++a) s.circ[i][j][a] = c[off_h + a];
      // remaining parts must be -omega_ij H exactly
      if (c[1] != -s.omega[i][j]) {
        pure_blocks = false;
        pure_witness = "H-part of [v_" + std::to_string(i) + ", m_" + std::to_string(j) +
                       "] != -omega_ij";
      }
      c[1] = K(0);
      for (std::size_t a = 0; a < m; ++a) c[off_h + a] = K(0);
      if (!vec_is_zero(c)) {
        pure_blocks = false;
        pure_witness = "[v_i, m_j] outside g^0";
      }
    }
  }
  rep.add("bracket_block_purity", pure_blocks, pure_witness);

  // circle symmetry
  {
    bool ok = true;
    std::string w;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (s.circ[i][j] != s.circ[j][i]) {
          ok = false;
          w = "circ(" + std::to_string(i) + "," + std::to_string(j) + ") asymmetric";
        }
    rep.add("circle_symmetric", ok, w);
  }

  // h-action and h structure constants.
  s.h_action.assign(m, zero_mat<K>(n, n));
  s.h_struct.assign(m, std::vector<Vec<K>>(m, Vec<K>(m, K(0))));
  {
    bool ok = true;
    std::string w;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t j = 0; j < n; ++j) {
        Vec<K> c = frame_coords(L.bracket(tg.h_block.basis[a], tg.V_basis[j]));
        for (std::size_t k = 0; k < n; ++k) {
          s.h_action[a][k][j] = c[off_v + k];
          c[off_v + k] = K(0);
        }
        if (!vec_is_zero(c) && ok) {
          ok = false;
          w = "[h_" + std::to_string(a) + ", v_" + std::to_string(j) + "] escapes g^1";
        }
      }
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        Vec<K> c = frame_coords(L.bracket(tg.h_block.basis[a], tg.h_block.basis[b]));
        for (std::size_t p = 0; p < m; ++p) {
          s.h_struct[a][b][p] = c[off_h + p];
          c[off_h + p] = K(0);
        }
        if (!vec_is_zero(c) && ok) {
          ok = false;
          w = "[h,h] escapes the h-block";
        }
      }
      // action on the minus side must be the same matrix
      for (std::size_t j = 0; j < n && ok; ++j) {
        Vec<K> c = frame_coords(L.bracket(tg.h_block.basis[a], tg.minus_partner[j]));
        for (std::size_t k = 0; k < n; ++k) {
          if (c[off_m + k] != s.h_action[a][k][j]) {
            ok = false;
            w = "h-action differs on e_- (x) V";
            break;
          }
        }
      }
    }
    rep.add("h_action_consistent", ok, w);
  }

  s.inner_h = zero_mat<K>(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      s.inner_h[a][b] = inner_g(tg.h_block.basis[a], tg.h_block.basis[b]);
  s.killing_h_sub = subalgebra_killing(L, tg.h_block);

  // Item 1: (g^i, g^j) = 0 unless i + j = 0.
  {
    std::vector<int> deg = {2, 0, -2};
    for (std::size_t a = 0; a < m; ++a) deg.push_back(0);
    for (std::size_t i = 0; i < n; ++i) deg.push_back(1);
    for (std::size_t i = 0; i < n; ++i) deg.push_back(-1);
    bool ok = true;
    std::string w;
    for (std::size_t p = 0; p < fv.size() && ok; ++p)
      for (std::size_t q = p; q < fv.size(); ++q) {
        if (deg[p] + deg[q] == 0) continue;
        if (!is_zero(inner_g(fv[p], fv[q]))) {
          ok = false;
          w = "frame pair (" + std::to_string(p) + "," + std::to_string(q) + ")";
          break;
        }
      }
    rep.add("inner_item1_graded_orthogonality", ok, w);
  }

  // Item 2 on the sl2 block: (X,Y) = 2 and (e+e-, e+e-) = (H,H) = -1.
  {
    K xy = inner_g(tg.X, tg.Y);
    K hh = inner_g(tg.H, tg.H);
    bool ok = (xy == K(2)) && (hh == K(-1)) && is_zero(inner_g(tg.X, tg.X)) &&
              is_zero(inner_g(tg.Y, tg.Y));
    rep.add("inner_item2_sl2_values", ok,
            ok ? "" : "(X,Y)=" + to_string(xy) + ", (H,H)=" + to_string(hh));
  }

  // Item 3: B(u,v) = 2 tr_V(uv) + B_h(u,v) on the h-block.
  {
    bool ok = true;
    std::string w;
    for (std::size_t a = 0; a < m && ok; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        K lhs = L.killing_form(tg.h_block.basis[a], tg.h_block.basis[b]);
        K tr(0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < n; ++k) tr += s.h_action[a][i][k] * s.h_action[b][k][i];
        K rhs = K(2) * tr + s.killing_h_sub[a][b];
        if (lhs != rhs) {
          ok = false;
          w = detail::witness2(a, b, lhs, rhs);
          break;
        }
      }
    rep.add("inner_item3_killing_trace_split", ok, w);
  }

  // Item 4: (e (x) x, f (x) y) = a(e,f) w(x,y) on the odd part.
  {
    bool ok = true;
    std::string w;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        K pm = inner_g(tg.V_basis[i], tg.minus_partner[j]);
        if (pm != s.omega[i][j]) {
          ok = false;
          w = detail::witness2(i, j, pm, s.omega[i][j]);
          break;
        }
        if (!is_zero(inner_g(tg.V_basis[i], tg.V_basis[j])) ||
            !is_zero(inner_g(tg.minus_partner[i], tg.minus_partner[j]))) {
          ok = false;
          w = "nonzero pairing inside g^{+-1}";
          break;
        }
      }
    rep.add("inner_item4_odd_pairing", ok, w);
  }

  // omega nondegenerate and h-invariant.
  {
    bool nd = (rank(s.omega) == n);
    rep.add("omega_nondegenerate", nd, nd ? "" : "rank deficient");
    bool inv = true;
    std::string w;
    for (std::size_t a = 0; a < m && inv; ++a) {
      // A^T W + W A = 0
      Mat<K> at = mat_transpose(s.h_action[a]);
      Mat<K> t1 = mat_mul(at, s.omega);
      Mat<K> t2 = mat_mul(s.omega, s.h_action[a]);
      for (std::size_t i = 0; i < n && inv; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (t1[i][j] + t2[i][j] != K(0)) {
            inv = false;
            w = "h_" + std::to_string(a) + " not in sp(V, omega)";
            break;
          }
    }
    rep.add("omega_h_invariant", inv, w);
  }

  // First product identity: (h, x o y) = w(hx, y) = w(hy, x).
  {
    bool ok = true;
    std::string w;
    for (std::size_t a = 0; a < m && ok; ++a) {
      Vec<K> ha(m, K(0));
      ha[a] = K(1);
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          K lhs = s.inner_of(ha, s.circ[i][j]);
          K r1(0), r2(0);
          for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l) {
              r1 += s.h_action[a][k][i] * s.omega[k][l] * (l == j ? K(1) : K(0));
              r2 += s.h_action[a][k][j] * s.omega[k][l] * (l == i ? K(1) : K(0));
            }
          }
          if (lhs != r1 || lhs != r2) {
            ok = false;
            w = "h=" + std::to_string(a) + " " + detail::witness2(i, j, lhs, r1);
            break;
          }
        }
    }
    rep.add("product_identity_pairing", ok, w);
  }

  // Second product identity:
  // (x o y) z - (x o z) y = 2 w(y,z) x - w(x,y) z + w(x,z) y.
  {
    bool ok = true;
    std::string w;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          Mat<K> mij = s.h_matrix(s.circ[i][j]);
          Mat<K> mik = s.h_matrix(s.circ[i][k]);
          Vec<K> lhs(n, K(0));
          for (std::size_t t = 0; t < n; ++t) lhs[t] = mij[t][k] - mik[t][j];
          Vec<K> rhs(n, K(0));
          rhs[i] += K(2) * s.omega[j][k];
          rhs[k] -= s.omega[i][j];
          rhs[j] += s.omega[i][k];
          if (lhs != rhs) {
            ok = false;
            w = "triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                std::to_string(k) + ")";
            break;
          }
        }
    rep.add("product_identity_cyclic", ok, w);
  }

  // V o V spans h (rank of the circle table).
  {
    Mat<K> rows;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) rows.push_back(s.circ[i][j]);
    bool ok = (rank(std::move(rows)) == m);
    rep.add("circle_spans_h", ok, ok ? "" : "rank < dim h");
  }

  return {std::move(s), std::move(rep)};
}

template <class K>
SpecialSymplecticData<K> extract(const LieAlgebra<K>& L, const TwoGrading<K>& tg) {
  auto [s, rep] = extract_checked(L, tg);
  if (!rep.all_pass()) throw structural_fault(rep);
  return std::move(s);
}

/// Rebuild the 2-gradable algebra from (V, omega, o) on the abstract basis
/// [X, H, Y, h.., e_+ (x) V, e_- (x) V]; Jacobi is audited before returning.
template <class K>
LieAlgebra<K> reconstruct(const SpecialSymplecticData<K>& s) {
  std::size_t n = s.dimV, m = s.dimH;
  std::size_t dim = 3 + m + 2 * n;
  std::size_t off_h = 3, off_v = 3 + m, off_m = 3 + m + n;
  std::vector<std::vector<SparseVec<K>>> table(dim);
  for (std::size_t i = 0; i < dim; ++i) table[i].resize(dim - i - 1);
  auto set = [&](std::size_t i, std::size_t j, SparseVec<K> v) {
    if (v.empty()) return;
    if (i < j) {
      table[i][j - i - 1] = std::move(v);
    } else {
      for (auto& [k, c] : v) c = -c;
      table[j][i - j - 1] = std::move(v);
    }
  };

  // sl2 block: [H,X] = 2X, [H,Y] = -2Y, [X,Y] = -4H.
  set(1, 0, {{0, K(2)}});
  set(0, 2, {{1, K(-4)}});
  set(1, 2, {{2, K(-2)}});
  for (std::size_t i = 0; i < n; ++i) {
    set(1, off_v + i, {{off_v + i, K(1)}});    // [H, e+x] = e+x
    set(1, off_m + i, {{off_m + i, K(-1)}});   // [H, e-x] = -e-x
    set(0, off_m + i, {{off_v + i, K(2)}});    // [X, e-x] = 2 e+x
    set(2, off_v + i, {{off_m + i, K(-2)}});   // [Y, e+x] = -2 e-x
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      SparseVec<K> v;
      for (std::size_t p = 0; p < m; ++p)
        if (!is_zero(s.h_struct[a][b][p])) v.emplace_back(off_h + p, s.h_struct[a][b][p]);
      set(off_h + a, off_h + b, std::move(v));
    }
    for (std::size_t j = 0; j < n; ++j) {
      SparseVec<K> vp, vm;
      for (std::size_t k = 0; k < n; ++k) {
        if (!is_zero(s.h_action[a][k][j])) {
          vp.emplace_back(off_v + k, s.h_action[a][k][j]);
          vm.emplace_back(off_m + k, s.h_action[a][k][j]);
        }
      }
      set(off_h + a, off_v + j, std::move(vp));
      set(off_h + a, off_m + j, std::move(vm));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < j) {
        if (!is_zero(s.omega[i][j])) {
          set(off_v + i, off_v + j, {{0, s.omega[i][j]}});   // omega x y e_+^2
          set(off_m + i, off_m + j, {{2, s.omega[i][j]}});   // omega x y e_-^2
        }
      }
      SparseVec<K> v;
      if (!is_zero(s.omega[i][j])) v.emplace_back(1, -s.omega[i][j]);  // -omega H
      for (std::size_t p = 0; p < m; ++p)
        if (!is_zero(s.circ[i][j][p])) v.emplace_back(off_h + p, s.circ[i][j][p]);
      set(off_v + i, off_m + j, std::move(v));
    }

  std::vector<std::string> labels = {"e+^2", "H", "e-^2"};
  for (std::size_t a = 0; a < m; ++a) labels.push_back("h" + std::to_string(a + 1));
  for (std::size_t i = 0; i < n; ++i) labels.push_back("e+x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) labels.push_back("e-x" + std::to_string(i + 1));
  auto L = make_lie_algebra(dim, std::move(labels), std::move(table),
                            s.algebra_name + "_reconstructed");
  std::string witness;
  if (!jacobi_audit(L, &witness)) {
    CheckReport rep;
    rep.add("reconstruct_jacobi", false, witness);
    throw structural_fault(rep);
  }
  // Simplicity route: the ideal generated by e_+^2 is everything.
  {
    Mat<K> ideal_vecs = {L.basis_vector(0)};
    Subspace<K> ideal = Subspace<K>::from_vectors(dim, ideal_vecs);
    bool grew = true;
    while (grew) {
      grew = false;
      Mat<K> next = ideal.basis;
      for (const auto& v : ideal.basis)
        for (std::size_t b = 0; b < dim; ++b) {
          Vec<K> br = L.bracket(v, L.basis_vector(b));
          if (!ideal.contains(br)) {
            next.push_back(br);
            grew = true;
          }
        }
      if (grew) ideal = Subspace<K>::from_vectors(dim, std::move(next));
    }
    if (ideal.dim() != dim) {
      CheckReport rep;
      rep.add("reconstruct_simplicity", false,
              "ideal of e+^2 has dim " + std::to_string(ideal.dim()));
      throw structural_fault(rep);
    }
  }
  return L;
}

/// [h, x o y] = (hx) o y + x o (hy) for all basis h, x, y.
template <class K>
bool circle_equivariance_audit(const SpecialSymplecticData<K>& s, std::string* witness = nullptr) {
  for (std::size_t a = 0; a < s.dimH; ++a) {
    Vec<K> ha(s.dimH, K(0));
    ha[a] = K(1);
    for (std::size_t i = 0; i < s.dimV; ++i)
      for (std::size_t j = 0; j < s.dimV; ++j) {
        Vec<K> lhs = s.h_bracket(ha, s.circ[i][j]);
        Vec<K> hx(s.dimV, K(0)), hy(s.dimV, K(0));
        for (std::size_t k = 0; k < s.dimV; ++k) {
          hx[k] = s.h_action[a][k][i];
          hy[k] = s.h_action[a][k][j];
        }
        Vec<K> xi(s.dimV, K(0)), xj(s.dimV, K(0));
        xi[i] = K(1);
        xj[j] = K(1);
        Vec<K> rhs = vec_add(s.circ_of(hx, xj), s.circ_of(xi, hy));
        if (lhs != rhs) {
          if (witness)
            *witness = "equivariance fails at (h,x,y) = (" + std::to_string(a) + "," +
                       std::to_string(i) + "," + std::to_string(j) + ")";
          return false;
        }
      }
  }
  return true;
}

/// View of the data over the Gaussian rationals; realified families are
/// audited through this complexification.
inline SpecialSymplecticData<Gaussian> complexify(const SpecialSymplecticData<Rational>& s) {
  SpecialSymplecticData<Gaussian> out;
  out.dimV = s.dimV;
  out.dimH = s.dimH;
  out.algebra_name = s.algebra_name + " (x) C";
  out.inner_scale = Gaussian(s.inner_scale);
  auto lift_mat = [](const Mat<Rational>& m) {
    Mat<Gaussian> o = zero_mat<Gaussian>(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m[i].size(); ++j) o[i][j] = Gaussian(m[i][j]);
    return o;
  };
  auto lift_vec = [](const Vec<Rational>& v) {
    Vec<Gaussian> o(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) o[i] = Gaussian(v[i]);
    return o;
  };
  out.omega = lift_mat(s.omega);
  out.inner_h = lift_mat(s.inner_h);
  out.killing_h_sub = lift_mat(s.killing_h_sub);
  for (const auto& m : s.h_action) out.h_action.push_back(lift_mat(m));
  out.circ.resize(s.dimV, std::vector<Vec<Gaussian>>(s.dimV));
  for (std::size_t i = 0; i < s.dimV; ++i)
    for (std::size_t j = 0; j < s.dimV; ++j) out.circ[i][j] = lift_vec(s.circ[i][j]);
  out.h_struct.resize(s.dimH, std::vector<Vec<Gaussian>>(s.dimH));
  for (std::size_t a = 0; a < s.dimH; ++a)
    for (std::size_t b = 0; b < s.dimH; ++b) out.h_struct[a][b] = lift_vec(s.h_struct[a][b]);
  return out;
}

// ---------------------------------------------------------------------------
// Weight audit for split data.
// ---------------------------------------------------------------------------

namespace detail {

// Eigenvalue candidates beyond the diagonal entries: square roots of the
// diagonal of M^2, which covers realified rotation blocks.
inline std::vector<Rational> sqrt_candidates(const Rational& d2) {
  std::vector<Rational> out;
  if (d2 >= 0) {
    try {
      Rational r = exact_sqrt(d2);
      out.push_back(r);
      out.push_back(-r);
    } catch (const std::domain_error&) {
    }
  }
  return out;
}

inline std::vector<Gaussian> sqrt_candidates(const Gaussian& d2) {
  std::vector<Gaussian> out;
  if (!is_zero(d2.im)) return out;
  try {
    if (d2.re >= 0) {
      Rational r = exact_sqrt(d2.re);
      out.push_back(Gaussian(r));
      out.push_back(Gaussian(-r));
    } else {
      Rational r = exact_sqrt(-d2.re);
      out.push_back(Gaussian(Rational(0), r));
      out.push_back(Gaussian(Rational(0), -r));
    }
  } catch (const std::domain_error&) {
  }
  return out;
}

}  // namespace detail

template <class K>
struct WeightReport {
  std::vector<Vec<K>> weights;           // one tuple per weight space
  std::vector<std::size_t> multiplicities;
  bool all_multiplicity_one = false;
  bool closed_under_negation = false;
  Vec<K> long_weight;
  std::map<int, std::size_t> partition_sizes;  // i in {-3,-1,1,3} -> |Phi_i|
  bool partition_ok = false;
  bool eigenvalue_identity_ok = false;
  std::string note;
};

/// Weight decomposition of V under a given Cartan basis of h (coords in the
/// h-block basis). Requires the Cartan action to split over the scalar field;
/// eigenvalue candidates are read from the action's diagonal after joint
/// splitting, which covers the split constructions used here.
template <class K>
WeightReport<K> weight_audit(const SpecialSymplecticData<K>& s,
                             const std::vector<Vec<K>>& cartan) {
  WeightReport<K> rep;
  std::size_t n = s.dimV, r = cartan.size();

  // Joint eigenspace refinement.
  struct Piece {
    Mat<K> basis;   // rows: vectors in V coordinates
    Vec<K> weight;  // eigenvalues so far
  };
  std::vector<Piece> pieces = {{identity_mat<K>(n), {}}};
  for (std::size_t t = 0; t < r; ++t) {
    Mat<K> A = s.h_matrix(cartan[t]);
    std::vector<Piece> next;
    for (auto& piece : pieces) {
      // Restrict A to the piece: M with A b_k = sum M[l][k] b_l.
      std::size_t d = piece.basis.size();
      Mat<K> basisT = mat_transpose(piece.basis);
      Mat<K> M = zero_mat<K>(d, d);
      for (std::size_t k = 0; k < d; ++k) {
        Vec<K> img = mat_vec(A, piece.basis[k]);
        auto c = solve(basisT, img);
        if (!c) throw std::domain_error("weight_audit: Cartan does not preserve a weight piece");
        for (std::size_t l = 0; l < d; ++l) M[l][k] = (*c)[l];
      }
      // Candidate eigenvalues: diagonal entries plus square roots of the
      // diagonal of M^2 (exact splitting verified below).
      std::vector<K> cands;
      auto push = [&](const K& c) {
        for (const auto& x : cands)
          if (x == c) return;
        cands.push_back(c);
      };
      Mat<K> M2 = mat_mul(M, M);
      for (std::size_t k = 0; k < d; ++k) {
        push(M[k][k]);
        for (const auto& c : detail::sqrt_candidates(M2[k][k])) push(c);
      }
      std::size_t found = 0;
      for (const auto& lam : cands) {
        Mat<K> shifted = M;
        for (std::size_t k = 0; k < d; ++k) shifted[k][k] -= lam;
        Mat<K> null = kernel(std::move(shifted));
        if (null.empty()) continue;
        Piece p;
        p.weight = piece.weight;
        p.weight.push_back(lam);
        for (const auto& x : null) {
          Vec<K> v(n, K(0));
          for (std::size_t k = 0; k < d; ++k) vec_axpy(v, x[k], piece.basis[k]);
          p.basis.push_back(std::move(v));
        }
        found += p.basis.size();
        next.push_back(std::move(p));
      }
      if (found != d)
        throw std::domain_error("weight_audit: Cartan action does not split over the scalars");
    }
    pieces = std::move(next);
  }

  for (auto& p : pieces) {
    rep.weights.push_back(p.weight);
    rep.multiplicities.push_back(p.basis.size());
  }
  rep.all_multiplicity_one = true;
  for (auto mlt : rep.multiplicities) rep.all_multiplicity_one &= (mlt == 1);

  rep.closed_under_negation = true;
  for (const auto& w : rep.weights) {
    Vec<K> nw = w;
    for (auto& x : nw) x = -x;
    bool found = false;
    for (const auto& w2 : rep.weights) found = found || (w2 == nw);
    rep.closed_under_negation &= found;
  }

  // Dual form on weights via the Gram matrix of ( , ) on the Cartan.
  Mat<K> G = zero_mat<K>(r, r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) G[a][b] = s.inner_of(cartan[a], cartan[b]);
  Mat<K> Ginv = mat_inverse(G);
  auto dual = [&](const Vec<K>& u, const Vec<K>& v) {
    K acc(0);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) acc += u[a] * Ginv[a][b] * v[b];
    return acc;
  };

  // Long weight: maximal dual-norm magnitude (the invariant form is definite
  // of either sign on the Cartan), ties broken by the coordinate tuple.
  std::size_t long_idx = 0;
  K best_norm(0);
  for (std::size_t i = 0; i < rep.weights.size(); ++i) {
    K nn = dual(rep.weights[i], rep.weights[i]);
    Rational mag = boost::multiprecision::abs(real_part(nn));
    Rational best_mag = boost::multiprecision::abs(real_part(best_norm));
    if (mag > best_mag || (nn == best_norm && rep.weights[i] > rep.weights[long_idx])) {
      best_norm = nn;
      long_idx = i;
    }
  }
  if (is_zero(best_norm)) throw std::domain_error("weight_audit: degenerate weight norms");
  rep.long_weight = rep.weights[long_idx];

  // Partition by i(mu) = 3 (mu, lam0)* / (lam0, lam0)*.
  rep.partition_ok = true;
  std::vector<int> part_of(rep.weights.size(), 0);
  for (std::size_t i = 0; i < rep.weights.size(); ++i) {
    K q = K(3) * dual(rep.weights[i], rep.long_weight) / best_norm;
    bool good = false;
    for (int v : {-3, -1, 1, 3})
      if (q == K(v)) {
        part_of[i] = v;
        rep.partition_sizes[v] += rep.multiplicities[i];
        good = true;
      }
    rep.partition_ok &= good;
  }
  rep.partition_ok &= (rep.partition_sizes[3] == 1 && rep.partition_sizes[-3] == 1);

  // (v+ o v-) w_r = -2r w(v+, v-) w_r with r = i/2 on every weight vector.
  rep.eigenvalue_identity_ok = rep.partition_ok;
  if (rep.partition_ok) {
    Vec<K> vplus, vminus;
    for (std::size_t i = 0; i < rep.weights.size(); ++i) {
      if (part_of[i] == 3) vplus = pieces[i].basis[0];
      if (part_of[i] == -3) vminus = pieces[i].basis[0];
    }
    Vec<K> prod = s.circ_of(vplus, vminus);
    Mat<K> P = s.h_matrix(prod);
    K wpm = s.omega_of(vplus, vminus);
    for (std::size_t i = 0; i < rep.weights.size() && rep.eigenvalue_identity_ok; ++i) {
      K factor = K(-1) * K(part_of[i]) * wpm;  // -2r = -i with r = i/2
      for (const auto& w : pieces[i].basis) {
        Vec<K> lhs = mat_vec(P, w);
        Vec<K> rhs = vec_scale(w, factor);
        if (lhs != rhs) {
          rep.eigenvalue_identity_ok = false;
          rep.note = "eigenvalue identity fails on a weight vector";
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace sympcon
