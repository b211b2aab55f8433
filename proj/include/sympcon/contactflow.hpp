#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "sympcon/catalog.hpp"

namespace sympcon {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Double-precision view of a matrix-model algebra with its graded frame and
/// symplectic data. All group work (exp, Ad, retraction, Maurer-Cartan
/// components) happens here; the exact modules stay upstream.
class FlowContext {
 public:
  FlowContext(const AlgebraBundle& bundle, const TwoGrading<Rational>& tg,
              const SpecialSymplecticData<Rational>& ssd)
      : family_(bundle.family) {
    if (!bundle.L.model)
      throw std::invalid_argument("FlowContext: group flows need a matrix model");
    const auto& L = bundle.L;
    d_ = static_cast<int>(L.dim);
    N_ = static_cast<int>(L.model->N);
    n_ = static_cast<int>(ssd.dimV);
    m_ = static_cast<int>(ssd.dimH);

    basis_.resize(d_);
    for (int i = 0; i < d_; ++i) {
      basis_[i] = MatrixXcd::Zero(N_, N_);
      for (int r = 0; r < N_; ++r)
        for (int c = 0; c < N_; ++c) {
          const auto& g = L.model->basis[i][r][c];
          basis_[i](r, c) = std::complex<double>(to_double(g.re), to_double(g.im));
        }
    }
    Bvec_.resize(2 * N_ * N_, d_);
    for (int j = 0; j < d_; ++j) {
      int row = 0;
      for (int r = 0; r < N_; ++r)
        for (int c = 0; c < N_; ++c) {
          Bvec_(row++, j) = basis_[j](r, c).real();
          Bvec_(row++, j) = basis_[j](r, c).imag();
        }
    }
    solver_.compute(Bvec_);

    auto fv = tg.frame_vectors();
    frame_.resize(d_, d_);
    for (int c = 0; c < d_; ++c)
      for (int r = 0; r < d_; ++r) frame_(r, c) = to_double(fv[c][r]);
    {
      Mat<Rational> F = mat_transpose(fv);
      Mat<Rational> Fi = mat_inverse(F);
      frame_inv_.resize(d_, d_);
      for (int r = 0; r < d_; ++r)
        for (int c = 0; c < d_; ++c) frame_inv_(r, c) = to_double(Fi[r][c]);
    }

    killing_.resize(d_, d_);
    for (int r = 0; r < d_; ++r)
      for (int c = 0; c < d_; ++c) killing_(r, c) = to_double(L.killing[r][c]);
    inner_scale_ = -1.0 / (2.0 * (n_ + 4.0));

    omega_.resize(n_, n_);
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) omega_(r, c) = to_double(ssd.omega[r][c]);
    h_action_.resize(m_);
    for (int a = 0; a < m_; ++a) {
      h_action_[a].resize(n_, n_);
      for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) h_action_[a](r, c) = to_double(ssd.h_action[a][r][c]);
    }
    circ_h_.assign(m_, MatrixXd::Zero(n_, n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int a = 0; a < m_; ++a) circ_h_[a](i, j) = to_double(ssd.circ[i][j][a]);
    h_struct_.assign(m_, MatrixXd::Zero(m_, m_));
    for (int p = 0; p < m_; ++p)
      for (int q = 0; q < m_; ++q)
        for (int r = 0; r < m_; ++r) h_struct_[r](p, q) = to_double(ssd.h_struct[p][q][r]);
    inner_h_.resize(m_, m_);
    for (int r = 0; r < m_; ++r)
      for (int c = 0; c < m_; ++c) inner_h_(r, c) = to_double(ssd.inner_h[r][c]);

    ad_.resize(d_);
    for (int i = 0; i < d_; ++i) {
      Mat<Rational> ad = L.ad_matrix(L.basis_vector(i));
      ad_[i].resize(d_, d_);
      for (int r = 0; r < d_; ++r)
        for (int c = 0; c < d_; ++c) ad_[i](r, c) = to_double(ad[r][c]);
    }
    seed_mat_ = mat_of(coords_double(bundle.seed));
  }

  int dim() const { return d_; }
  int dimV() const { return n_; }
  int dimH() const { return m_; }
  int matrix_size() const { return N_; }
  const std::string& family() const { return family_; }
  const MatrixXd& omega() const { return omega_; }

  static VectorXd coords_double(const Vec<Rational>& v) {
    VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out(i) = to_double(v[i]);
    return out;
  }

  MatrixXcd mat_of(const VectorXd& coords) const {
    MatrixXcd m = MatrixXcd::Zero(N_, N_);
    for (int i = 0; i < d_; ++i) m += coords(i) * basis_[i];
    return m;
  }

  VectorXd coords_of(const MatrixXcd& m, double* residual = nullptr) const {
    VectorXd rhs(2 * N_ * N_);
    int row = 0;
    for (int r = 0; r < N_; ++r)
      for (int c = 0; c < N_; ++c) {
        rhs(row++) = m(r, c).real();
        rhs(row++) = m(r, c).imag();
      }
    VectorXd x = solver_.solve(rhs);
    if (residual) *residual = (Bvec_ * x - rhs).norm();
    return x;
  }

  MatrixXcd exp_of(const VectorXd& coords) const { return mat_of(coords).exp(); }

  /// Ad_{g^{-1}}(a) in algebra coordinates for a matrix-model group element.
  VectorXd ad_inverse_coords(const MatrixXcd& g, const MatrixXcd& a_mat) const {
    MatrixXcd conj = g.partialPivLu().solve(a_mat * g);  // g^{-1} a g
    return coords_of(conj);
  }

  // Frame component layout: [X, H, Y, h(m), v(n), m(n)].
  struct FrameComponents {
    double x = 0, h = 0, y = 0;
    VectorXd rho, u, minus;
  };

  FrameComponents components(const VectorXd& coords) const {
    VectorXd fc = frame_inv_ * coords;
    FrameComponents out;
    out.x = fc(0);
    out.h = fc(1);
    out.y = fc(2);
    out.rho = fc.segment(3, m_);
    out.u = fc.segment(3 + m_, n_);
    out.minus = fc.segment(3 + m_ + n_, n_);
    return out;
  }

  VectorXd coords_of_frame(double x, double h, double y, const VectorXd& rho, const VectorXd& u,
                           const VectorXd& minus) const {
    VectorXd fc = VectorXd::Zero(d_);
    fc(0) = x;
    fc(1) = h;
    fc(2) = y;
    fc.segment(3, m_) = rho;
    fc.segment(3 + m_, n_) = u;
    fc.segment(3 + m_ + n_, n_) = minus;
    return frame_ * fc;
  }

  MatrixXd h_matrix(const VectorXd& h) const {
    MatrixXd out = MatrixXd::Zero(n_, n_);
    for (int a = 0; a < m_; ++a) out += h(a) * h_action_[a];
    return out;
  }

  VectorXd circ_of(const VectorXd& x, const VectorXd& y) const {
    VectorXd out(m_);
    for (int a = 0; a < m_; ++a) out(a) = x.dot(circ_h_[a] * y);
    return out;
  }

  VectorXd h_bracket(const VectorXd& a, const VectorXd& b) const {
    VectorXd out(m_);
    for (int r = 0; r < m_; ++r) out(r) = a.dot(h_struct_[r] * b);
    return out;
  }

  double inner_h(const VectorXd& a, const VectorXd& b) const { return a.dot(inner_h_ * b); }

  double omega_of(const VectorXd& x, const VectorXd& y) const { return x.dot(omega_ * y); }

  /// R_h(x,y) = 2 w(x,y) h + x o (hy) - y o (hx), h-coordinates.
  VectorXd curvature_Rh(const VectorXd& h, const VectorXd& x, const VectorXd& y) const {
    MatrixXd A = h_matrix(h);
    return 2.0 * omega_of(x, y) * h + circ_of(x, A * y) - circ_of(y, A * x);
  }

  /// Normalized invariant pairing (a, b) = -B(a,b)/(2(dim V + 4)).
  double inner_g(const VectorXd& a, const VectorXd& b) const {
    return inner_scale_ * a.dot(killing_ * b);
  }

  MatrixXd ad_of(const VectorXd& coords) const {
    MatrixXd out = MatrixXd::Zero(d_, d_);
    for (int i = 0; i < d_; ++i) out += coords(i) * ad_[i];
    return out;
  }

  const MatrixXcd& seed_matrix() const { return seed_mat_; }

 private:
  std::string family_;
  int d_ = 0, N_ = 0, n_ = 0, m_ = 0;
  std::vector<MatrixXcd> basis_;
  MatrixXd Bvec_;
  Eigen::ColPivHouseholderQR<MatrixXd> solver_;
  MatrixXd frame_, frame_inv_, killing_, omega_, inner_h_;
  std::vector<MatrixXd> h_action_, circ_h_, h_struct_, ad_;
  double inner_scale_ = 0;
  MatrixXcd seed_mat_;
};

/// Point on Gamma_a with the invariant functions read off from
/// Ad_{g^{-1}} a = 1/2 e_-^2 + rho + e_+ (x) u + 1/2 f e_+^2.
struct FramePoint {
  MatrixXcd g;
  VectorXd A_coords;
  VectorXd rho, u;
  double f = 0;
  double q_residual = 0;
};

inline double q_residual_of(const FlowContext::FrameComponents& fc) {
  double r = (fc.y - 0.5) * (fc.y - 0.5) + fc.h * fc.h;
  r += fc.minus.squaredNorm();
  return std::sqrt(r);
}

inline double q_residual(const FlowContext& ctx, const MatrixXcd& g, const MatrixXcd& a_mat) {
  auto fc = ctx.components(ctx.ad_inverse_coords(g, a_mat));
  return q_residual_of(fc);
}

inline FramePoint make_frame_point(const FlowContext& ctx, const MatrixXcd& g,
                                   const MatrixXcd& a_mat) {
  FramePoint fp;
  fp.g = g;
  fp.A_coords = ctx.ad_inverse_coords(g, a_mat);
  auto fc = ctx.components(fp.A_coords);
  fp.rho = fc.rho;
  fp.u = fc.u;
  fp.f = 2.0 * fc.x;
  fp.q_residual = q_residual_of(fc);
  return fp;
}

struct retraction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Newton retraction onto Gamma_a: solves the linearized Q-constraint with
/// the minimum-norm step (pseudo-inverse), which lives in a complement of the
/// tangent space ker of the constraint Jacobian.
inline FramePoint retract(const FlowContext& ctx, MatrixXcd g, const MatrixXcd& a_mat,
                          double tol = 1e-12, int max_iter = 50) {
  int nc = 2 + ctx.dimV();  // constraint components: y - 1/2, h, minus-part
  for (int it = 0; it < max_iter; ++it) {
    VectorXd A = ctx.ad_inverse_coords(g, a_mat);
    auto fc = ctx.components(A);
    VectorXd F(nc);
    F(0) = fc.y - 0.5;
    F(1) = fc.h;
    F.segment(2, ctx.dimV()) = fc.minus;
    if (F.norm() < tol) return make_frame_point(ctx, g, a_mat);
    // d/dt (Ad_{(g exp(tv))^{-1}} a) = -[v, A]; constraint Jacobian columns
    // are the projected brackets.
    MatrixXd J(nc, ctx.dim());
    for (int i = 0; i < ctx.dim(); ++i) {
      VectorXd ei = VectorXd::Zero(ctx.dim());
      ei(i) = 1.0;
      VectorXd dA = -(ctx.ad_of(ei) * A);
      auto dfc = ctx.components(dA);
      J(0, i) = dfc.y;
      J(1, i) = dfc.h;
      J.col(i).segment(2, ctx.dimV()) = dfc.minus;
    }
    VectorXd step = J.completeOrthogonalDecomposition().solve(-F);
    g = g * ctx.mat_of(step).exp();
  }
  throw retraction_error("retract: Newton did not reach tolerance");
}

// Tangent directions at a frame point, as left-translated algebra vectors.
inline VectorXd dir_theta(const FlowContext& ctx, const FramePoint& fp, const VectorXd& x) {
  // e_- (x) x + e_+ (x) (rho x) + 1/2 w(u,x) e_+^2
  MatrixXd R = ctx.h_matrix(fp.rho);
  return ctx.coords_of_frame(0.5 * ctx.omega_of(fp.u, x), 0.0, 0.0,
                             VectorXd::Zero(ctx.dimH()), R * x, x);
}

inline VectorXd dir_eta(const FlowContext& ctx, const VectorXd& h) {
  return ctx.coords_of_frame(0.0, 0.0, 0.0, h, VectorXd::Zero(ctx.dimV()),
                             VectorXd::Zero(ctx.dimV()));
}

inline VectorXd dir_flow(const FramePoint& fp) { return fp.A_coords; }

/// (kappa, theta, eta) components of a tangent vector, plus the reassembly
/// residual against the dependent g^1/g^2 parts.
struct CoframeSample {
  double kappa = 0;
  VectorXd theta;
  VectorXd eta;
  double reassembly_residual = 0;
};

inline CoframeSample mc_decompose(const FlowContext& ctx, const FramePoint& fp,
                                  const VectorXd& mu) {
  auto fc = ctx.components(mu);
  CoframeSample out;
  out.kappa = -fc.y;
  out.theta = fc.minus;
  out.eta = fc.rho + 2.0 * out.kappa * fp.rho;
  // Dependent components on T Gamma_a:
  //   alpha_+ = rho theta - 2 u kappa,  kappa_+ = 1/2 w(u,theta) - f kappa,
  //   and the e_+e_- part vanishes.
  MatrixXd R = ctx.h_matrix(fp.rho);
  VectorXd alpha_expected = R * out.theta - 2.0 * out.kappa * fp.u;
  double kplus_expected = 0.5 * ctx.omega_of(fp.u, out.theta) - fp.f * out.kappa;
  double r2 = (fc.u - alpha_expected).squaredNorm();
  r2 += (fc.x - kplus_expected) * (fc.x - kplus_expected);
  r2 += fc.h * fc.h;
  out.reassembly_residual = std::sqrt(r2);
  return out;
}

namespace detail_flow {

// Forms evaluated at an arbitrary group point (ambient extensions).
struct FormsAt {
  double kappa;
  VectorXd theta;
  VectorXd eta;
};

inline FormsAt forms_at(const FlowContext& ctx, const MatrixXcd& g, const MatrixXcd& a_mat,
                        const VectorXd& mu) {
  VectorXd A = ctx.ad_inverse_coords(g, a_mat);
  auto afc = ctx.components(A);
  auto fc = ctx.components(mu);
  FormsAt out;
  out.kappa = -fc.y;
  out.theta = fc.minus;
  out.eta = fc.rho + 2.0 * out.kappa * afc.rho;
  return out;
}

struct FunsAt {
  VectorXd rho, u;
  double f;
  double energy;  // f + (rho, rho)
};

inline FunsAt funs_at(const FlowContext& ctx, const MatrixXcd& g, const MatrixXcd& a_mat) {
  VectorXd A = ctx.ad_inverse_coords(g, a_mat);
  auto fc = ctx.components(A);
  FunsAt out;
  out.rho = fc.rho;
  out.u = fc.u;
  out.f = 2.0 * fc.x;
  out.energy = out.f + ctx.inner_h(fc.rho, fc.rho);
  return out;
}

}  // namespace detail_flow

/// Exterior-derivative samples of the coframe over the ambient surface
/// (s,t) -> g exp(s mu1) exp(t mu2); valid for tangent mu1, mu2 at g.
struct ExteriorDerivatives {
  double dkappa = 0;
  VectorXd dtheta;
  VectorXd deta;
};

inline ExteriorDerivatives exterior_derivatives(const FlowContext& ctx, const FramePoint& fp,
                                                const MatrixXcd& a_mat, const VectorXd& mu1,
                                                const VectorXd& mu2, double eps) {
  using detail_flow::forms_at;
  MatrixXcd M1 = ctx.mat_of(mu1), M2 = ctx.mat_of(mu2);
  MatrixXcd E1p = (eps * M1).exp(), E1m = (-eps * M1).exp();
  MatrixXcd E2p = (eps * M2).exp(), E2m = (-eps * M2).exp();

  // dA_t/ds: mu(d/dt) = mu2 frozen along s -> g exp(s mu1)
  auto Atp = forms_at(ctx, fp.g * E1p, a_mat, mu2);
  auto Atm = forms_at(ctx, fp.g * E1m, a_mat, mu2);
  // dA_s/dt: mu(d/ds) at (0,t) = Ad_{exp(-t mu2)} mu1
  VectorXd mu1p = ctx.coords_of(E2m * M1 * E2p);
  VectorXd mu1m = ctx.coords_of(E2p * M1 * E2m);
  auto Asp = forms_at(ctx, fp.g * E2p, a_mat, mu1p);
  auto Asm = forms_at(ctx, fp.g * E2m, a_mat, mu1m);

  ExteriorDerivatives out;
  out.dkappa = (Atp.kappa - Atm.kappa) / (2 * eps) - (Asp.kappa - Asm.kappa) / (2 * eps);
  out.dtheta = (Atp.theta - Atm.theta) / (2 * eps) - (Asp.theta - Asm.theta) / (2 * eps);
  out.deta = (Atp.eta - Atm.eta) / (2 * eps) - (Asp.eta - Asm.eta) / (2 * eps);
  return out;
}

/// Residuals of the six structure equations at fp for a tangent pair, with
/// central differences of step eps. The one-form equations use mu1.
struct StructureResiduals {
  double dkappa = 0, dtheta = 0, deta = 0, drho = 0, du = 0, df = 0;
  double max() const {
    return std::max({dkappa, dtheta, deta, drho, du, df});
  }
};

inline StructureResiduals structure_residuals(const FlowContext& ctx, const FramePoint& fp,
                                              const MatrixXcd& a_mat, const VectorXd& mu1,
                                              const VectorXd& mu2, double eps) {
  StructureResiduals out;
  auto d = exterior_derivatives(ctx, fp, a_mat, mu1, mu2, eps);
  auto f1 = detail_flow::forms_at(ctx, fp.g, a_mat, mu1);
  auto f2 = detail_flow::forms_at(ctx, fp.g, a_mat, mu2);

  // d kappa = 1/2 w(theta ^ theta):  d kappa(m1,m2) = w(theta1, theta2)
  out.dkappa = std::abs(d.dkappa - ctx.omega_of(f1.theta, f2.theta));
  // d theta + eta ^ theta = 0
  VectorXd t = d.dtheta + ctx.h_matrix(f1.eta) * f2.theta - ctx.h_matrix(f2.eta) * f1.theta;
  out.dtheta = t.norm();
  // d eta + 1/2 [eta,eta] = R_rho(theta ^ theta)
  VectorXd e = d.deta + ctx.h_bracket(f1.eta, f2.eta) -
               ctx.curvature_Rh(fp.rho, f1.theta, f2.theta);
  out.deta = e.norm();

  // One-form equations along mu1 (central differences of the functions).
  MatrixXcd M1 = ctx.mat_of(mu1);
  MatrixXcd E1p = (eps * M1).exp(), E1m = (-eps * M1).exp();
  auto fp_ = detail_flow::funs_at(ctx, fp.g * E1p, a_mat);
  auto fm_ = detail_flow::funs_at(ctx, fp.g * E1m, a_mat);
  VectorXd drho = (fp_.rho - fm_.rho) / (2 * eps);
  VectorXd du = (fp_.u - fm_.u) / (2 * eps);
  double denergy = (fp_.energy - fm_.energy) / (2 * eps);

  // d rho + [eta, rho] = u o theta
  VectorXd r = drho + ctx.h_bracket(f1.eta, fp.rho) - ctx.circ_of(fp.u, f1.theta);
  out.drho = r.norm();
  // d u + eta . u = (rho^2 + f) theta
  MatrixXd R = ctx.h_matrix(fp.rho);
  VectorXd uu = du + ctx.h_matrix(f1.eta) * fp.u - (R * (R * f1.theta) + fp.f * f1.theta);
  out.du = uu.norm();
  // d f + d(rho, rho) = 0
  out.df = std::abs(denergy);
  return out;
}

/// Per-equation max residual across a set of tangent pairs.
inline StructureResiduals structure_residuals_max(
    const FlowContext& ctx, const FramePoint& fp, const MatrixXcd& a_mat,
    const std::vector<std::pair<VectorXd, VectorXd>>& pairs, double eps) {
  StructureResiduals out;
  for (const auto& [m1, m2] : pairs) {
    auto r = structure_residuals(ctx, fp, a_mat, m1, m2, eps);
    out.dkappa = std::max(out.dkappa, r.dkappa);
    out.dtheta = std::max(out.dtheta, r.dtheta);
    out.deta = std::max(out.deta, r.deta);
    out.drho = std::max(out.drho, r.drho);
    out.du = std::max(out.du, r.du);
    out.df = std::max(out.df, r.df);
  }
  return out;
}

/// Measured convergence orders log2(res(eps_i)/res(eps_{i+1})) for a halving
/// sweep, averaged over consecutive pairs, per equation.
struct ResidualOrders {
  std::vector<double> eps;
  std::vector<StructureResiduals> residuals;
  double order_dkappa = 0, order_dtheta = 0, order_deta = 0, order_drho = 0, order_du = 0,
         order_df = 0;
  double min_order() const {
    return std::min({order_dkappa, order_dtheta, order_deta, order_drho, order_du, order_df});
  }
  double max_order() const {
    return std::max({order_dkappa, order_dtheta, order_deta, order_drho, order_du, order_df});
  }
};

inline ResidualOrders residual_orders(const FlowContext& ctx, const FramePoint& fp,
                                      const MatrixXcd& a_mat,
                                      const std::vector<std::pair<VectorXd, VectorXd>>& pairs,
                                      const std::vector<double>& sweep) {
  ResidualOrders out;
  out.eps = sweep;
  // residuals per pair per eps; a direction pair can be degenerate for one
  // equation (zero truncation coefficient), so each equation is fitted on the
  // pair where its residual is largest at the finest step.
  std::vector<std::vector<StructureResiduals>> table(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (double e : sweep)
      table[p].push_back(structure_residuals(ctx, fp, a_mat, pairs[p].first, pairs[p].second, e));
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    StructureResiduals acc;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      acc.dkappa = std::max(acc.dkappa, table[p][i].dkappa);
      acc.dtheta = std::max(acc.dtheta, table[p][i].dtheta);
      acc.deta = std::max(acc.deta, table[p][i].deta);
      acc.drho = std::max(acc.drho, table[p][i].drho);
      acc.du = std::max(acc.du, table[p][i].du);
      acc.df = std::max(acc.df, table[p][i].df);
    }
    out.residuals.push_back(acc);
  }
  auto fit = [&](auto proj) {
    std::size_t best = 0;
    double best_val = -1;
    std::size_t last = sweep.size() - 1;
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (proj(table[p][last]) > best_val) {
        best_val = proj(table[p][last]);
        best = p;
      }
    double acc = 0;
    int cnt = 0;
    for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
      double r0 = proj(table[best][i]), r1 = proj(table[best][i + 1]);
      if (r1 <= 0 || r0 <= 0) continue;
      acc += std::log(r0 / r1) / std::log(sweep[i] / sweep[i + 1]);
      ++cnt;
    }
    return cnt ? acc / cnt : 0.0;
  };
  out.order_dkappa = fit([](const StructureResiduals& r) { return r.dkappa; });
  out.order_dtheta = fit([](const StructureResiduals& r) { return r.dtheta; });
  out.order_deta = fit([](const StructureResiduals& r) { return r.deta; });
  out.order_drho = fit([](const StructureResiduals& r) { return r.drho; });
  out.order_du = fit([](const StructureResiduals& r) { return r.du; });
  out.order_df = fit([](const StructureResiduals& r) { return r.df; });
  return out;
}

/// Drift of f + (rho,rho) and of the ad-trace invariants tr(ad_A^k), k=2..6,
/// along a retracted path flowing in a fixed theta-direction.
struct ConservationRecord {
  double energy_drift = 0;
  double invariant_drift = 0;
  int steps = 0;
};

inline ConservationRecord conserved_invariants(const FlowContext& ctx, FramePoint fp,
                                               const MatrixXcd& a_mat, const VectorXd& x_dir,
                                               int steps, double step_size, double tol = 1e-12,
                                               bool round_trip = false) {
  auto traces = [&](const VectorXd& A) {
    MatrixXd ad = ctx.ad_of(A);
    std::vector<double> t;
    MatrixXd p = ad * ad;
    for (int k = 2; k <= 6; ++k) {
      t.push_back(p.trace());
      p = p * ad;
    }
    return t;
  };
  double e0 = fp.f + ctx.inner_h(fp.rho, fp.rho);
  auto t0 = traces(fp.A_coords);
  ConservationRecord rec;
  rec.steps = steps;
  int leg = std::max(1, steps / 10);
  for (int s = 0; s < steps; ++s) {
    // theta-coordinate flows need not be complete; the round-trip option
    // alternates direction in short legs so long paths stay inside one
    // well-conditioned chart
    double dir = (round_trip && (s / leg) % 2) ? -1.0 : 1.0;
    VectorXd mu = dir_theta(ctx, fp, x_dir);
    MatrixXcd g = fp.g * (dir * step_size * ctx.mat_of(mu)).exp();
    fp = retract(ctx, g, a_mat, tol);
    double e = fp.f + ctx.inner_h(fp.rho, fp.rho);
    rec.energy_drift = std::max(rec.energy_drift, std::abs(e - e0));
    auto t = traces(fp.A_coords);
    for (std::size_t k = 0; k < t.size(); ++k) {
      // relative to the running magnitude: the invariants reach the size of
      // |ad_A|^k, and their float evaluation error scales with it
      double scale = std::max({1.0, std::abs(t0[k]), std::abs(t[k])});
      rec.invariant_drift = std::max(rec.invariant_drift, std::abs(t[k] - t0[k]) / scale);
    }
  }
  return rec;
}

/// Fraction of pseudo-random points of the cone G . e_+^2 on which the
/// momentum pairing (a, sample) is strictly positive.
inline double transversality_scan(const FlowContext& ctx, const VectorXd& a_coords,
                                  std::size_t samples, std::uint64_t seed,
                                  double spread = 0.8) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, spread);
  std::size_t positive = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    VectorXd z1(ctx.dim()), z2(ctx.dim());
    for (int i = 0; i < ctx.dim(); ++i) z1(i) = gauss(rng);
    for (int i = 0; i < ctx.dim(); ++i) z2(i) = gauss(rng);
    MatrixXcd g = ctx.mat_of(z1).exp() * ctx.mat_of(z2).exp();
    MatrixXcd sample = g * ctx.seed_matrix() * g.inverse();
    VectorXd sc = ctx.coords_of(sample);
    if (ctx.inner_g(a_coords, sc) > 0) ++positive;
  }
  return static_cast<double>(positive) / static_cast<double>(samples);
}

/// Residual record for the vector-field form of the structure equations and
/// the coordinate-flow commutator.
struct VectorFieldAudit {
  double xi_h_f = 0;       // xi_h(f) = 0
  double xi_h_rho = 0;     // xi_h(rho) = -[h, rho]
  double xi_x_rho = 0;     // xi_x(rho) = u o x
  double xi_x_u = 0;       // xi_x(u) = (rho^2 + f) x
  double xi_x_f = 0;       // xi_x(f) = -2 w(rho u, x)
  double commutator = 0;   // [xi_x, xi_y] + 2w(x,y) xi_rho + xi_{x o rho y} - xi_{y o rho x}
};

inline VectorFieldAudit vector_field_audit(const FlowContext& ctx, const FramePoint& fp,
                                           const MatrixXcd& a_mat, const VectorXd& x,
                                           const VectorXd& y, const VectorXd& h, double eps) {
  using detail_flow::funs_at;
  VectorFieldAudit out;
  MatrixXd R = ctx.h_matrix(fp.rho);

  {
    VectorXd mu = dir_eta(ctx, h);
    MatrixXcd E = (eps * ctx.mat_of(mu)).exp();
    auto p = funs_at(ctx, fp.g * E, a_mat), m = funs_at(ctx, fp.g * E.inverse(), a_mat);
    out.xi_h_f = std::abs((p.f - m.f) / (2 * eps));
    VectorXd drho = (p.rho - m.rho) / (2 * eps);
    out.xi_h_rho = (drho + ctx.h_bracket(h, fp.rho)).norm();
  }
  {
    VectorXd mu = dir_theta(ctx, fp, x);
    MatrixXcd E = (eps * ctx.mat_of(mu)).exp();
    auto p = funs_at(ctx, fp.g * E, a_mat), m = funs_at(ctx, fp.g * E.inverse(), a_mat);
    VectorXd drho = (p.rho - m.rho) / (2 * eps);
    out.xi_x_rho = (drho - ctx.circ_of(fp.u, x)).norm();
    VectorXd du = (p.u - m.u) / (2 * eps);
    out.xi_x_u = (du - (R * (R * x) + fp.f * x)).norm();
    double df = (p.f - m.f) / (2 * eps);
    out.xi_x_f = std::abs(df + 2.0 * ctx.omega_of(R * fp.u, x));
  }
  {
    // One-sided commutator of the coordinate flows (flows re-evaluate the
    // field at each point). On Gamma_a the bracket carries the vertical part
    // 2 w(x,y) xi_a on top of the -xi_{R_rho(x,y)} seen on the quotient.
    auto flow = [&](const MatrixXcd& g0, const VectorXd& dir, double t) {
      // midpoint step: Euler's O(t^2) defect would swamp the t^2 commutator
      FramePoint q0 = make_frame_point(ctx, g0, a_mat);
      MatrixXcd gh = g0 * (0.5 * t * ctx.mat_of(dir_theta(ctx, q0, dir))).exp();
      FramePoint qh = make_frame_point(ctx, gh, a_mat);
      return MatrixXcd(g0 * (t * ctx.mat_of(dir_theta(ctx, qh, dir))).exp());
    };
    MatrixXcd g1 = flow(flow(flow(flow(fp.g, x, eps), y, eps), x, -eps), y, -eps);
    MatrixXcd disp = (fp.g.partialPivLu().solve(g1)).log();
    VectorXd lhs = ctx.coords_of(disp) / (eps * eps);
    VectorXd rho_dir = -2.0 * ctx.omega_of(x, y) * fp.rho - ctx.circ_of(x, R * y) +
                       ctx.circ_of(y, R * x);
    VectorXd rhs = dir_eta(ctx, rho_dir) + 2.0 * ctx.omega_of(x, y) * fp.A_coords;
    out.commutator = (lhs - rhs).norm();
  }
  return out;
}

}  // namespace sympcon
