#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympcon/exact_linalg.hpp"

namespace sympcon {

enum class RootKind { A, B, C, D, E6, E7, E8, F4, G2 };

inline std::string kind_name(RootKind k) {
  switch (k) {
    case RootKind::A: return "A";
    case RootKind::B: return "B";
    case RootKind::C: return "C";
    case RootKind::D: return "D";
    case RootKind::E6: return "E6";
    case RootKind::E7: return "E7";
    case RootKind::E8: return "E8";
    case RootKind::F4: return "F4";
    case RootKind::G2: return "G2";
  }
  return "?";
}

/// Finite root system in simple-root coordinates. The invariant form is the
/// one induced by the ambient realization, scaled so short roots have norm 2;
/// every pairing <lam,alpha> = 2(lam,alpha)/(alpha,alpha) is then an integer.
struct RootSystem {
  RootKind kind;
  int rank = 0;
  std::vector<std::vector<int>> roots;   // coordinates in the simple-root basis
  Mat<Rational> cartan;                  // cartan[i][j] = <alpha_i, alpha_j>
  Mat<Rational> gram;                    // gram[i][j] = (alpha_i, alpha_j), short norm 2
  std::vector<bool> long_flags;
  std::vector<Rational> norm2;           // (beta,beta) per root
  std::size_t n_positive = 0;            // roots[0..n_positive) positive, negatives mirrored

  std::size_t size() const { return roots.size(); }

  std::size_t neg_index(std::size_t i) const {
    return i < n_positive ? i + n_positive : i - n_positive;
  }

  Rational form(const std::vector<int>& a, const std::vector<int>& b) const {
    Rational s(0);
    for (int i = 0; i < rank; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < rank; ++j)
        if (b[j] != 0) s += Rational(a[i]) * gram[i][j] * Rational(b[j]);
    }
    return s;
  }

  std::optional<std::size_t> index_of(const std::vector<int>& r) const {
    auto it = index_.find(r);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool is_root(const std::vector<int>& r) const { return index_.count(r) > 0; }

  /// Index of the highest root (maximal height, then lexicographically
  /// largest); always long.
  std::size_t highest_root() const { return highest_; }

  std::map<std::vector<int>, std::size_t> index_;
  std::size_t highest_ = 0;
};

namespace detail {

inline std::vector<std::vector<Rational>> simple_root_realization(RootKind kind, int rank) {
  using V = std::vector<Rational>;
  std::vector<V> roots;
  auto unit = [&](int amb, int i) {
    V v(amb, Rational(0));
    v[i] = 1;
    return v;
  };
  switch (kind) {
    case RootKind::A: {
      if (rank < 1) throw std::invalid_argument("A_n needs rank >= 1");
      int amb = rank + 1;
      for (int i = 0; i < rank; ++i) {
        V v(amb, Rational(0));
        v[i] = 1;
        v[i + 1] = -1;
        roots.push_back(v);
      }
      break;
    }
    case RootKind::B: {
      if (rank < 2) throw std::invalid_argument("B_n needs rank >= 2");
      for (int i = 0; i + 1 < rank; ++i) {
        V v(rank, Rational(0));
        v[i] = 1;
        v[i + 1] = -1;
        roots.push_back(v);
      }
      roots.push_back(unit(rank, rank - 1));
      break;
    }
    case RootKind::C: {
      if (rank < 2) throw std::invalid_argument("C_n needs rank >= 2");
      for (int i = 0; i + 1 < rank; ++i) {
        V v(rank, Rational(0));
        v[i] = 1;
        v[i + 1] = -1;
        roots.push_back(v);
      }
      V v(rank, Rational(0));
      v[rank - 1] = 2;
      roots.push_back(v);
      break;
    }
    case RootKind::D: {
      if (rank < 3) throw std::invalid_argument("D_n needs rank >= 3");
      for (int i = 0; i + 1 < rank; ++i) {
        V v(rank, Rational(0));
        v[i] = 1;
        v[i + 1] = -1;
        roots.push_back(v);
      }
      V v(rank, Rational(0));
      v[rank - 2] = 1;
      v[rank - 1] = 1;
      roots.push_back(v);
      break;
    }
    case RootKind::E6:
    case RootKind::E7:
    case RootKind::E8: {
      int n = kind == RootKind::E6 ? 6 : (kind == RootKind::E7 ? 7 : 8);
      if (rank != n) throw std::invalid_argument("E-series rank fixed by kind");
      // Bourbaki realization in R^8.
      std::vector<V> e8;
      V a1(8, Rational(-1, 2));
      a1[0] = Rational(1, 2);
      a1[7] = Rational(1, 2);
      e8.push_back(a1);
      V a2(8, Rational(0));
      a2[0] = 1;
      a2[1] = 1;
      e8.push_back(a2);
      for (int i = 0; i < 6; ++i) {
        V v(8, Rational(0));
        v[i] = -1;
        v[i + 1] = 1;
        e8.push_back(v);
      }
      roots.assign(e8.begin(), e8.begin() + n);
      break;
    }
    case RootKind::F4: {
      if (rank != 4) throw std::invalid_argument("F4 rank is 4");
      using R = Rational;
      roots = {V{R(0), R(1), R(-1), R(0)}, V{R(0), R(0), R(1), R(-1)},
               V{R(0), R(0), R(0), R(1)},
               V{R(1, 2), R(-1, 2), R(-1, 2), R(-1, 2)}};
      break;
    }
    case RootKind::G2: {
      if (rank != 2) throw std::invalid_argument("G2 rank is 2");
      using R = Rational;
      roots = {V{R(1), R(-1), R(0)}, V{R(-2), R(1), R(1)}};
      break;
    }
  }
  return roots;
}

}  // namespace detail

inline RootSystem build_root_system(RootKind kind, int rank) {
  RootSystem rs;
  rs.kind = kind;
  auto simple = detail::simple_root_realization(kind, rank);
  rs.rank = static_cast<int>(simple.size());

  // Gram matrix from the realization, rescaled so the shortest simple root
  // has norm 2.
  auto dot = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  Rational min_norm(0);
  for (const auto& a : simple) {
    Rational n = dot(a, a);
    if (min_norm.is_zero() || n < min_norm) min_norm = n;
  }
  Rational scale = Rational(2) / min_norm;
  rs.gram = zero_mat<Rational>(rs.rank, rs.rank);
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j) rs.gram[i][j] = dot(simple[i], simple[j]) * scale;
  rs.cartan = zero_mat<Rational>(rs.rank, rs.rank);
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j) {
      rs.cartan[i][j] = Rational(2) * rs.gram[i][j] / rs.gram[j][j];
      if (den(rs.cartan[i][j]) != 1)
        throw std::logic_error("non-integral Cartan entry");
    }

  // Reflection closure in simple-root coordinates.
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> work;
  for (int i = 0; i < rs.rank; ++i) {
    std::vector<int> v(rs.rank, 0);
    v[i] = 1;
    seen.insert(v);
    work.push_back(v);
  }
  while (!work.empty()) {
    auto beta = work.back();
    work.pop_back();
    for (int j = 0; j < rs.rank; ++j) {
      Rational p(0);
      for (int i = 0; i < rs.rank; ++i)
        if (beta[i] != 0) p += Rational(beta[i]) * rs.cartan[i][j];
      if (den(p) != 1) throw std::logic_error("non-integral pairing during closure");
      int pi = static_cast<int>(num(p));
      auto refl = beta;
      refl[j] -= pi;
      if (seen.insert(refl).second) work.push_back(refl);
    }
  }

  // Enumeration: positive roots sorted lexicographically on coordinates,
  // negatives mirrored after them.
  std::vector<std::vector<int>> pos;
  for (const auto& r : seen) {
    bool positive = false;
    for (int i = 0; i < rs.rank; ++i) {
      if (r[i] != 0) {
        positive = r[i] > 0;
        break;
      }
    }
    if (positive) pos.push_back(r);
  }
  std::sort(pos.begin(), pos.end());
  rs.n_positive = pos.size();
  rs.roots = pos;
  for (const auto& r : pos) {
    std::vector<int> n(r);
    for (auto& x : n) x = -x;
    rs.roots.push_back(n);
  }
  for (std::size_t i = 0; i < rs.roots.size(); ++i) rs.index_[rs.roots[i]] = i;

  Rational max_norm(0);
  rs.norm2.resize(rs.roots.size());
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    rs.norm2[i] = rs.form(rs.roots[i], rs.roots[i]);
    if (rs.norm2[i] > max_norm) max_norm = rs.norm2[i];
  }
  rs.long_flags.resize(rs.roots.size());
  std::set<Rational> lengths;
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    rs.long_flags[i] = (rs.norm2[i] == max_norm);
    lengths.insert(rs.norm2[i]);
  }
  if (lengths.size() > 2) throw std::logic_error("more than two root lengths");

  // Highest root: maximal height, ties broken lexicographically.
  long best_h = -1;
  std::size_t best = 0;
  for (std::size_t i = 0; i < rs.n_positive; ++i) {
    long h = 0;
    for (int x : rs.roots[i]) h += x;
    if (h > best_h || (h == best_h && rs.roots[i] > rs.roots[best])) {
      best_h = h;
      best = i;
    }
  }
  rs.highest_ = best;
  if (!rs.long_flags[best]) throw std::logic_error("highest root not long");
  return rs;
}

inline RootSystem build_root_system(const std::string& kind, int rank) {
  static const std::map<std::string, RootKind> names = {
      {"A", RootKind::A},   {"B", RootKind::B},   {"C", RootKind::C},
      {"D", RootKind::D},   {"E6", RootKind::E6}, {"E7", RootKind::E7},
      {"E8", RootKind::E8}, {"F4", RootKind::F4}, {"G2", RootKind::G2}};
  auto it = names.find(kind);
  if (it == names.end()) throw std::invalid_argument("unknown root system kind: " + kind);
  return build_root_system(it->second, rank);
}

/// <lam, alpha> = 2(lam,alpha)/(alpha,alpha); integral for lam in the root
/// lattice and alpha a root.
inline long pairing(const RootSystem& rs, const std::vector<int>& lam, std::size_t alpha_idx) {
  if (alpha_idx >= rs.size()) throw std::invalid_argument("pairing: not a root index");
  const auto& alpha = rs.roots[alpha_idx];
  Rational p = Rational(2) * rs.form(lam, alpha) / rs.norm2[alpha_idx];
  if (den(p) != 1) throw std::logic_error("pairing: non-integral value");
  return static_cast<long>(num(p));
}

inline long pairing(const RootSystem& rs, const std::vector<int>& lam,
                    const std::vector<int>& alpha) {
  auto idx = rs.index_of(alpha);
  if (!idx) throw std::invalid_argument("pairing: alpha not a root");
  return pairing(rs, lam, *idx);
}

/// Grading labels <beta, alpha0> for a chosen long root alpha0; values lie in
/// {-2,...,2} with +-2 attained exactly at +-alpha0.
inline std::vector<int> grading_labels(const RootSystem& rs, std::size_t alpha0_idx) {
  if (alpha0_idx >= rs.size()) throw std::invalid_argument("grading_labels: bad root index");
  if (!rs.long_flags[alpha0_idx]) throw std::invalid_argument("grading_labels: alpha0 must be long");
  std::vector<int> labels(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    long p = pairing(rs, rs.roots[i], alpha0_idx);
    if (p < -2 || p > 2) throw std::logic_error("grading label out of range");
    if ((p == 2 && i != alpha0_idx) || (p == -2 && i != rs.neg_index(alpha0_idx)))
      throw std::logic_error("label +-2 away from +-alpha0");
    labels[i] = static_cast<int>(p);
  }
  return labels;
}

}  // namespace sympcon
