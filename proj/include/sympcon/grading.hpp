#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympcon/liecore.hpp"

namespace sympcon {

struct grading_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// 5-block decomposition of a 2-gradable algebra by a maximal root element,
/// with the normalized frame: [H,X] = 2X, [H,Y] = -2Y, [X,Y] = -4H where
/// X = e_+^2, Y = e_-^2, H = -e_+e_- and a(e_+,e_-) = 1. The g^1 block is the
/// module V via x <-> e_+ (x) x; minus_partner[i] realizes e_- (x) x_i.
template <class K = Rational>
struct TwoGrading {
  Vec<K> X, Y, H;                      // e_+^2, e_-^2, grading element
  std::array<Subspace<K>, 5> blocks;   // g^{-2}..g^{2}, index i+2
  Subspace<K> h_block;                 // centralizer of sl_{alpha0} inside g^0
  std::vector<Vec<K>> V_basis;         // basis of g^1 (algebra coordinates)
  std::vector<Vec<K>> minus_partner;   // e_- (x) x_i in g^{-1}

  const Subspace<K>& block(int i) const { return blocks[i + 2]; }
  std::size_t dimV() const { return V_basis.size(); }
  std::size_t dimH() const { return h_block.dim(); }

  Vec<K> eplus_eminus() const {
    Vec<K> v = H;
    for (auto& c : v) c = -c;
    return v;
  }

  std::array<std::size_t, 5> block_dims() const {
    return {blocks[0].dim(), blocks[1].dim(), blocks[2].dim(), blocks[3].dim(),
            blocks[4].dim()};
  }

  /// Frame basis in canonical order [X, H, Y, h_1.., v_1.., m_1..]; columns of
  /// the change-of-basis matrix from frame coordinates to algebra coordinates.
  std::vector<Vec<K>> frame_vectors() const {
    std::vector<Vec<K>> f = {X, H, Y};
    for (const auto& h : h_block.basis) f.push_back(h);
    for (const auto& v : V_basis) f.push_back(v);
    for (const auto& m : minus_partner) f.push_back(m);
    return f;
  }
};

namespace detail {

template <class K>
Subspace<K> eigenspace(const LieAlgebra<K>& L, const Mat<K>& adH, int eigenvalue) {
  Mat<K> m = adH;
  for (std::size_t i = 0; i < L.dim; ++i) m[i][i] -= K(eigenvalue);
  return Subspace<K>::from_vectors(L.dim, kernel(std::move(m)));
}

}  // namespace detail

/// Re-derive the normalized frame from X and H: rescales e_-^2 so that
/// [X,Y] = -4H holds literally. Idempotent on an already-normalized grading.
template <class K>
TwoGrading<K> normalize_frame(const LieAlgebra<K>& L, TwoGrading<K> tg) {
  if (tg.block(-2).dim() != 1)
    throw grading_error("normalize_frame: g^{-2} not one dimensional");
  Vec<K> b = tg.block(-2).basis[0];
  Vec<K> br = L.bracket(tg.X, b);
  // [X, b] = t H with t != 0; otherwise the g^2/g^{-2} pairing degenerates.
  K t(0);
  for (std::size_t i = 0; i < L.dim; ++i) {
    if (!is_zero(tg.H[i])) {
      t = br[i] / tg.H[i];
      break;
    }
  }
  if (is_zero(t)) throw grading_error("normalize_frame: degenerate g^2/g^{-2} pairing");
  Vec<K> check = vec_sub(br, vec_scale(tg.H, t));
  if (!vec_is_zero(check)) throw grading_error("normalize_frame: [X, g^{-2}] not along H");
  tg.Y = vec_scale(std::move(b), K(-4) / t);
  // Partner frame for g^{-1}: e_- (x) x = -1/2 [Y, e_+ (x) x].
  tg.minus_partner.clear();
  for (const auto& v : tg.V_basis)
    tg.minus_partner.push_back(vec_scale(L.bracket(tg.Y, v), K(Rational(-1, 2))));
  return tg;
}

/// Grade the algebra by a maximal root element. The seed is completed to an
/// sl_2 triple exactly; failures of the eigenvalue structure are reported as
/// grading errors (they signal a seed outside the long-root orbit).
template <class K>
TwoGrading<K> grade(const LieAlgebra<K>& L, const Vec<K>& seed) {
  TwoGrading<K> tg;
  tg.X = seed;
  if (vec_is_zero(seed)) throw grading_error("grade: zero seed");

  // Solve (ad e)^2 f = -2 e, then H = [e, f0].
  Mat<K> ade = L.ad_matrix(seed);
  Mat<K> ade2 = mat_mul(ade, ade);
  Vec<K> rhs = vec_scale(seed, K(-2));
  auto f0 = solve(ade2, rhs);
  if (!f0) throw grading_error("grade: seed is not a maximal root element ((ad e)^2 f = -2e unsolvable)");
  tg.H = L.bracket(seed, *f0);

  Mat<K> adH = L.ad_matrix(tg.H);
  std::size_t total = 0;
  for (int i = -2; i <= 2; ++i) {
    tg.blocks[i + 2] = detail::eigenspace(L, adH, i);
    total += tg.blocks[i + 2].dim();
  }
  if (total != L.dim)
    throw grading_error("grade: ad(H) eigenvalues escape {-2..2} (non-long seed?)");
  if (tg.block(2).dim() != 1 || tg.block(-2).dim() != 1)
    throw grading_error("grade: dim g^{+-2} != 1 (non-long seed)");
  if (tg.block(1).dim() == 0)
    throw grading_error("grade: dim V = 0 rejected");

  // Project f0 onto the (-2)-eigenspace; (e, H, f) is then an sl2 triple.
  Vec<K> f(L.dim, K(0));
  {
    Mat<K> all;
    for (int i = -2; i <= 2; ++i)
      for (const auto& row : tg.blocks[i + 2].basis) all.push_back(row);
    Mat<K> allT = mat_transpose(all);
    auto c = solve(allT, *f0);
    if (!c) throw grading_error("grade: eigenspaces do not span");
    for (std::size_t k = 0; k < tg.blocks[0].dim(); ++k)
      vec_axpy(f, (*c)[k], tg.blocks[0].basis[k]);
  }
  if (!vec_is_zero(vec_sub(L.bracket(seed, f), tg.H)))
    throw grading_error("grade: sl2 completion failed");

  // h-block: elements of g^0 commuting with the whole sl2 triple.
  {
    Mat<K> adf = L.ad_matrix(f);
    Mat<K> sys;
    const auto& g0 = tg.block(0);
    // unknowns: coords in g0 basis; equations: [x, e] = 0 and [x, f] = 0
    std::size_t d0 = g0.dim();
    sys = zero_mat<K>(2 * L.dim, d0);
    for (std::size_t j = 0; j < d0; ++j) {
      Vec<K> be = L.bracket(g0.basis[j], seed);
      Vec<K> bf = L.bracket(g0.basis[j], f);
      for (std::size_t i = 0; i < L.dim; ++i) {
        sys[i][j] = be[i];
        sys[L.dim + i][j] = bf[i];
      }
    }
    Mat<K> nul = kernel(std::move(sys));
    Mat<K> vecs;
    for (const auto& x : nul) {
      Vec<K> v(L.dim, K(0));
      for (std::size_t j = 0; j < d0; ++j) vec_axpy(v, x[j], g0.basis[j]);
      vecs.push_back(std::move(v));
    }
    tg.h_block = Subspace<K>::from_vectors(L.dim, std::move(vecs));
  }
  if (tg.h_block.dim() + 1 != tg.block(0).dim())
    throw grading_error("grade: g^0 != F H + h");
  if (tg.h_block.contains(tg.H))
    throw grading_error("grade: H lies in the h-block");

  tg.V_basis = tg.block(1).basis;
  return normalize_frame(L, std::move(tg));
}

/// Structure constants of L rewritten in the graded frame
/// [X, H, Y, h.., v.., m..]; used by the reconstruction round-trip.
template <class K>
std::vector<std::vector<SparseVec<K>>> frame_structure_constants(const LieAlgebra<K>& L,
                                                                 const TwoGrading<K>& tg) {
  auto fv = tg.frame_vectors();
  std::size_t d = fv.size();
  if (d != L.dim) throw grading_error("frame_structure_constants: frame incomplete");
  Mat<K> F = mat_transpose(fv);  // columns = frame vectors
  Mat<K> Finv = mat_inverse(F);
  std::vector<std::vector<SparseVec<K>>> table(d);
  for (std::size_t i = 0; i < d; ++i) table[i].resize(d - i - 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      table[i][j - i - 1] = sparsify(mat_vec(Finv, L.bracket(fv[i], fv[j])));
  return table;
}

}  // namespace sympcon
