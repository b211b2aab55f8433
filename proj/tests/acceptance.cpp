// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "sympcon/contactflow.hpp"
#include "sympcon/json_io.hpp"

using namespace sympcon;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

struct Entry {
  AlgebraBundle bundle;
  TwoGrading<Rational> tg;
  SpecialSymplecticData<Rational> ssd;
  CheckReport checks;
};

std::map<std::string, Entry> g_entries;

const std::vector<std::string> kIdentitySuite = {"sl_real:3", "sl_real:4", "su:1,2", "su:2,2",
                                                 "sp_real:2", "sp_real:3", "so_real:2,3",
                                                 "g2_split"};

Entry& entry(const std::string& spec) {
  auto it = g_entries.find(spec);
  if (it != g_entries.end()) return it->second;
  Entry e{build_algebra(spec), {}, {}, {}};
  e.tg = grade(e.bundle.L, e.bundle.seed);
  auto [ssd, rep] = extract_checked(e.bundle.L, e.tg);
  e.ssd = std::move(ssd);
  e.checks = std::move(rep);
  return g_entries.emplace(spec, std::move(e)).first->second;
}

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// --------------------------------------------------------------------------

void criterion_1_identity_suite() {
  auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (const auto& spec : kIdentitySuite) {
    auto& e = entry(spec);
    bool ok = jacobi_audit(e.bundle.L);
    ok &= e.checks.all_pass();  // invariant-form items 1-4 plus both product identities
    // (e+e-, e+e-) = -1 exactly
    Rational scale = Rational(-1) / (Rational(2) * Rational(long(e.ssd.dimV) + 4));
    ok &= (scale * e.bundle.L.killing_form(e.tg.H, e.tg.H) == Rational(-1));
    if (!ok && detail.empty()) detail = spec + ": " + e.checks.first_failure();
    pass &= ok;
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass &= (sec < 60.0);
  report(1, "exact identity suite on 8 algebras", pass,
         detail.empty() ? ("runtime " + std::to_string(sec) + " s") : detail);
}

void criterion_2_killing_normalization() {
  bool pass = true;
  std::string detail;
  for (const auto& spec : kIdentitySuite) {
    auto& e = entry(spec);
    Rational expect = Rational(2) * Rational(long(e.ssd.dimV) + 4);
    if (e.bundle.L.killing_form(e.tg.H, e.tg.H) != expect) {
      pass = false;
      if (detail.empty()) detail = spec;
    }
  }
  report(2, "B(H,H) = 2(dim V + 4) exactly on every algebra", pass, detail);
}

void criterion_3_curvature_dimensions() {
  auto start = std::chrono::steady_clock::now();
  struct Row {
    const char* spec;
    std::size_t K, R, W;
  };
  const Row rows[] = {{"sp_real:2", 3, 3, 0},
                      {"sp_real:3", 45, 10, 35},
                      {"sl_real:3", 1, 1, 0},
                      {"sl_real:4", 9, 4, 5},
                      {"g2_split", 3, 3, 0}};
  bool pass = true;
  std::string detail;
  for (const auto& r : rows) {
    auto& e = entry(r.spec);
    auto Ks = bianchi_kernel(e.ssd);
    auto dec = decompose(e.ssd, Ks);
    bool ok = dec.dim_K == r.K && dec.dim_R == r.R && dec.dim_W == r.W;
    if (!ok && detail.empty())
      detail = std::string(r.spec) + " got (" + std::to_string(dec.dim_K) + "," +
               std::to_string(dec.dim_R) + "," + std::to_string(dec.dim_W) + ")";
    pass &= ok;
  }
  // independent cross-checks of the kernel dimensions
  pass &= (2 * binom(4, 3) - binom(5, 4) == 3);    // full-sp count, dim V = 2
  pass &= (4 * binom(6, 3) - binom(7, 4) == 45);   // full-sp count, dim V = 4
  pass &= (1 * 1 == 1 && 3 * 3 == 9);              // S^2 W (x) S^2 W* counts
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass &= (sec < 300.0);
  report(3, "curvature decomposition dimensions (K, R, W)", pass, detail);
}

void criterion_4_prolongation() {
  struct Row {
    const char* spec;
    std::size_t dim;
  };
  const Row rows[] = {
      {"g2_split", 4}, {"sl_real:3", 2}, {"sl_real:4", 4}, {"su:1,2", 2}, {"sp_real:2", 6}};
  bool pass = true;
  std::string detail;
  for (const auto& r : rows) {
    auto& e = entry(r.spec);
    auto pro = prolongation(e.ssd);
    bool ok = pro.basis.dim() == r.dim && pro.psi_contained;
    if (r.spec != std::string("sp_real:2")) ok &= (pro.basis.dim() == e.ssd.dimV);
    if (!ok && detail.empty())
      detail = std::string(r.spec) + " got " + std::to_string(pro.basis.dim());
    pass &= ok;
  }
  report(4, "prolongation dimensions (= dim V, except the 2-dim full-sp case = 6)", pass,
         detail);
}

void criterion_5_schur() {
  bool pass = true;
  std::string detail;
  for (const char* spec : {"g2_split", "sl_real:4", "sp_real:3", "su:2,2"}) {
    auto& e = entry(spec);
    auto s = schur_space(e.ssd);
    if (s.dim() != 1) {
      pass = false;
      if (detail.empty()) detail = std::string(spec) + " got " + std::to_string(s.dim());
    }
  }
  report(5, "schur-type solution space is the identity line for dim V >= 4", pass, detail);
}

void criterion_6_round_trip() {
  bool pass = true;
  std::string detail;
  for (const char* spec : {"sp_real:2", "g2_split"}) {
    auto& e = entry(spec);
    try {
      auto recon = reconstruct(e.ssd);
      auto frame_tab = frame_structure_constants(e.bundle.L, e.tg);
      bool same = recon.dim == e.bundle.L.dim;
      for (std::size_t i = 0; i < recon.dim && same; ++i)
        for (std::size_t j = i + 1; j < recon.dim && same; ++j)
          same = densify(recon.bracket_basis(i, j), recon.dim) ==
                 densify(frame_tab[i][j - i - 1], recon.dim);
      if (!same) {
        pass = false;
        if (detail.empty()) detail = spec;
      }
    } catch (const std::exception& ex) {
      pass = false;
      detail = ex.what();
    }
  }
  report(6, "extract -> reconstruct reproduces the graded constants exactly", pass, detail);
}

struct FlowSetup {
  FlowContext ctx;
  MatrixXcd a_mat;
  FramePoint fp;

  explicit FlowSetup(Entry& e, std::uint64_t momentum_seed)
      : ctx(e.bundle, e.tg, e.ssd),
        a_mat(ctx.mat_of(
            FlowContext::coords_double(momentum_q_generic(e.bundle, e.tg, momentum_seed)))),
        fp(retract(ctx, MatrixXcd::Identity(ctx.matrix_size(), ctx.matrix_size()), a_mat)) {
    VectorXd x1 = VectorXd::Zero(ctx.dimV()), x2 = VectorXd::Zero(ctx.dimV());
    for (int i = 0; i < ctx.dimV(); ++i) {
      x1(i) = 1.0 / (1.0 + i);
      x2(i) = (i % 2 ? -0.7 : 0.4) + 0.1 * i;
    }
    fp = retract(ctx, fp.g * (0.25 * ctx.mat_of(dir_theta(ctx, fp, x1))).exp(), a_mat);
    fp = retract(ctx, fp.g * (0.15 * ctx.mat_of(dir_theta(ctx, fp, x2))).exp(), a_mat);
  }
};

void criterion_7_structure_equations() {
  bool pass = true;
  std::string detail;
  for (const char* spec : {"su:2,2", "sp_real:2"}) {
    auto& e = entry(spec);
    FlowSetup fs(e, 2024);
    VectorXd x1 = VectorXd::Zero(fs.ctx.dimV()), x2 = VectorXd::Zero(fs.ctx.dimV());
    for (int i = 0; i < fs.ctx.dimV(); ++i) {
      x1(i) = 1.0 / (1.0 + i);
      x2(i) = (i % 2 ? -0.7 : 0.4) + 0.1 * i;
    }
    VectorXd h = VectorXd::Zero(fs.ctx.dimH());
    h(0) = 1.0;
    if (fs.ctx.dimH() > 1) h(fs.ctx.dimH() - 1) = -0.6;
    VectorXd t1 = dir_theta(fs.ctx, fs.fp, x1), t2 = dir_theta(fs.ctx, fs.fp, x2);
    VectorXd e1 = dir_eta(fs.ctx, h);
    std::vector<std::pair<VectorXd, VectorXd>> pairs;
    pairs.emplace_back(t1, t2);
    pairs.emplace_back(t2, t1);
    pairs.emplace_back(e1, t1);
    pairs.emplace_back(VectorXd(0.7 * t1 + 0.3 * dir_flow(fs.fp)), t2);
    pairs.emplace_back(VectorXd(t2 + 0.2 * e1), VectorXd(t1 - 0.1 * dir_flow(fs.fp)));
    auto ords = residual_orders(fs.ctx, fs.fp, fs.a_mat, pairs, {1e-2, 5e-3, 2.5e-3});
    // the d-eta right-hand side is the embedded curvature R_rho evaluated at
    // the frame point, so the order on that equation certifies the comparison
    bool ok = ords.min_order() >= 1.9 && ords.max_order() <= 2.1;
    if (!ok && detail.empty())
      detail = std::string(spec) + " orders [" + std::to_string(ords.min_order()) + ", " +
               std::to_string(ords.max_order()) + "]";
    pass &= ok;
  }
  report(7, "structure-equation residual orders in [1.9, 2.1] on both flows", pass, detail);
}

void criterion_8_conservation() {
  bool pass = true;
  std::string detail;
  for (const char* spec : {"sp_real:2", "su:2,2"}) {
    auto& e = entry(spec);
    FlowSetup fs(e, 2024);
    VectorXd x = VectorXd::Zero(fs.ctx.dimV());
    for (int i = 0; i < fs.ctx.dimV(); ++i) x(i) = 1.0 / (1.0 + i);
    auto rec = conserved_invariants(fs.ctx, fs.fp, fs.a_mat, x, 1000, 1e-3, 1e-12,
                                    /*round_trip=*/true);
    bool ok = rec.energy_drift < 1e-9 && rec.invariant_drift < 1e-9;
    if (!ok && detail.empty())
      detail = std::string(spec) + " drift " + std::to_string(rec.energy_drift) + " / " +
               std::to_string(rec.invariant_drift);
    pass &= ok;
  }
  report(8, "f + (rho,rho) and ad-trace invariants drift < 1e-9 over 1000 steps", pass, detail);
}

void criterion_9_momenta() {
  bool pass = true;
  std::string detail;
  {
    auto& e = entry("su:2,2");
    FlowContext ctx(e.bundle, e.tg, e.ssd);
    auto a = momentum_bochner(e.bundle, 1, 1);
    double frac = transversality_scan(ctx, FlowContext::coords_double(a), 10000, 12345);
    if (frac != 1.0) {
      pass = false;
      detail = "su(2,2) bochner fraction " + std::to_string(frac);
    }
    if (centralizer(e.bundle.L, a).dim() != 7) {
      pass = false;
      detail = "su(2,2) bochner stab dim";
    }
    // hat-s consistency through the conjugate normal form
    auto an = momentum_normal_form(e.bundle, e.tg, e.ssd, Rational(1),
                                   Rho0Kind::ComplexStructure);
    auto rho0 = e.tg.h_block.coords_of(canonical_rho0(e.bundle, e.tg, e.ssd, Rational(1)));
    auto rep = stabilizer_report(e.bundle, e.tg, e.ssd, an, rho0);
    if (!(rep.stab_dim == 7 && rep.consistent)) {
      pass = false;
      detail = "su(2,2) stab decomposition";
    }
    if (symmetry_dimension(e.bundle.L, momentum_random_cartan(e.bundle, 42)) !=
        e.bundle.rank - 1) {
      pass = false;
      detail = "su(2,2) generic cartan symmetry dim";
    }
  }
  {
    auto& e = entry("sp_real:2");
    FlowContext ctx(e.bundle, e.tg, e.ssd);
    auto a = momentum_ricci(e.bundle, Rational(1));
    double frac = transversality_scan(ctx, FlowContext::coords_double(a), 10000, 12345);
    if (frac != 1.0) {
      pass = false;
      detail = "sp(4,R) ricci fraction " + std::to_string(frac);
    }
    if (symmetry_dimension(e.bundle.L, momentum_random_cartan(e.bundle, 42)) !=
        e.bundle.rank - 1) {
      pass = false;
      detail = "sp(4,R) generic cartan symmetry dim";
    }
  }
  {
    auto& e = entry("sl_real:3");
    FlowContext ctx(e.bundle, e.tg, e.ssd);
    auto a = momentum_normal_form(e.bundle, e.tg, e.ssd, Rational(1), Rho0Kind::Zero);
    double frac = transversality_scan(ctx, FlowContext::coords_double(a), 10000, 12345);
    if (!(frac < 1.0)) {
      pass = false;
      detail = "sl(3,R) rotation-only fraction " + std::to_string(frac);
    }
  }
  report(9, "model momenta: transversality fractions and stabilizer dimensions", pass, detail);
}

void criterion_10_determinism() {
  auto run = [&] {
    auto& e = entry("sp_real:2");
    FlowContext ctx(e.bundle, e.tg, e.ssd);
    auto a = momentum_q_generic(e.bundle, e.tg, 5);
    MatrixXcd a_mat = ctx.mat_of(FlowContext::coords_double(a));
    auto fp = retract(ctx, MatrixXcd::Identity(4, 4), a_mat);
    double frac = transversality_scan(ctx, FlowContext::coords_double(a), 2000, 777);
    VectorXd x(2);
    x << 1.0, 0.5;
    auto rec = conserved_invariants(ctx, fp, a_mat, x, 100, 1e-3);
    json j;
    j["frac"] = frac;
    j["drift"] = rec.energy_drift;
    j["f"] = fp.f;
    j["algebra"] = algebra_to_json(e.bundle.L);
    return j.dump();
  };
  std::string r1 = run();
  std::string r2 = run();
  report(10, "identical config and seed give byte-identical reports", r1 == r2);
}

}  // namespace

int main() {
  try {
    criterion_1_identity_suite();
    criterion_2_killing_normalization();
    criterion_3_curvature_dimensions();
    criterion_4_prolongation();
    criterion_5_schur();
    criterion_6_round_trip();
    criterion_7_structure_equations();
    criterion_8_conservation();
    criterion_9_momenta();
    criterion_10_determinism();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
