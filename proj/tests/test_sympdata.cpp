#include <catch2/catch_amalgamated.hpp>

#include "sympcon/catalog.hpp"

using namespace sympcon;

namespace {

const char* kSpecs[] = {"sl_real:3", "sl_real:4", "su:1,2",      "su:2,2",
                        "sp_real:2", "sp_real:3", "so_real:2,3", "so_real:3,4",
                        "g2_split"};

SpecialSymplecticData<Rational> data_for(const char* spec) {
  auto b = build_algebra(spec);
  auto tg = grade(b.L, b.seed);
  return extract(b.L, tg);
}

}  // namespace

TEST_CASE("the identity battery passes exactly on every family") {
  for (const char* spec : kSpecs) {
    CAPTURE(spec);
    auto b = build_algebra(spec);
    auto tg = grade(b.L, b.seed);
    auto [ssd, rep] = extract_checked(b.L, tg);
    CAPTURE(rep.first_failure());
    CHECK(rep.all_pass());
    (void)ssd;
  }
}

TEST_CASE("normalized pairing values on the sl2 block") {
  for (const char* spec : {"sp_real:2", "g2_split"}) {
    auto b = build_algebra(spec);
    auto tg = grade(b.L, b.seed);
    auto ssd = extract(b.L, tg);
    Rational scale = Rational(-1) / (Rational(2) * Rational(long(ssd.dimV) + 4));
    // (e+e-, e+e-) = -1 and (e+^2, e-^2) = 2
    CHECK(scale * b.L.killing_form(tg.H, tg.H) == Rational(-1));
    CHECK(scale * b.L.killing_form(tg.X, tg.Y) == Rational(2));
  }
}

TEST_CASE("full symplectic families have the rank-one circle product") {
  // (x o y) z = w(x,z) y + w(y,z) x characterizes the h = sp(V) case
  for (const char* spec : {"sp_real:2", "sp_real:3"}) {
    CAPTURE(spec);
    auto ssd = data_for(spec);
    std::size_t n = ssd.dimV;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Mat<Rational> M = ssd.h_matrix(ssd.circ[i][j]);
        for (std::size_t k = 0; k < n; ++k) {
          Vec<Rational> lhs(n, Rational(0));
          for (std::size_t t = 0; t < n; ++t) lhs[t] = M[t][k];
          Vec<Rational> rhs(n, Rational(0));
          rhs[j] += ssd.omega[i][k];
          rhs[i] += ssd.omega[j][k];
          CHECK(lhs == rhs);
        }
      }
  }
}

TEST_CASE("circle equivariance holds and injected faults are caught") {
  auto ssd = data_for("sp_real:2");
  CHECK(circle_equivariance_audit(ssd));
  auto broken = ssd;
  broken.circ[0][1] = zero_vec<Rational>(ssd.dimH);
  broken.circ[1][0] = zero_vec<Rational>(ssd.dimH);
  std::string w;
  CHECK_FALSE(circle_equivariance_audit(broken, &w));
  CHECK_FALSE(w.empty());
}

TEST_CASE("reconstruction reproduces the graded structure constants exactly") {
  for (const char* spec : {"sp_real:2", "g2_split", "su:2,2"}) {
    CAPTURE(spec);
    auto b = build_algebra(spec);
    auto tg = grade(b.L, b.seed);
    auto ssd = extract(b.L, tg);
    auto recon = reconstruct(ssd);
    REQUIRE(recon.dim == b.L.dim);
    CHECK(jacobi_audit(recon));
    auto frame_tab = frame_structure_constants(b.L, tg);
    for (std::size_t i = 0; i < recon.dim; ++i)
      for (std::size_t j = i + 1; j < recon.dim; ++j)
        CHECK(densify(recon.bracket_basis(i, j), recon.dim) ==
              densify(frame_tab[i][j - i - 1], recon.dim));
  }
}

TEST_CASE("extract, reconstruct, grade, extract is the identity on the data") {
  for (const char* spec : {"sp_real:2", "g2_split"}) {
    CAPTURE(spec);
    auto b = build_algebra(spec);
    auto tg = grade(b.L, b.seed);
    auto ssd = extract(b.L, tg);
    auto recon = reconstruct(ssd);
    // seed the reconstructed algebra with its own e_+^2 basis vector
    auto tg2 = grade(recon, recon.basis_vector(0));
    CHECK(tg2.block_dims() == tg.block_dims());
    auto ssd2 = extract(recon, tg2);
    CHECK(ssd2.omega == ssd.omega);
    for (std::size_t i = 0; i < ssd.dimV; ++i)
      for (std::size_t j = 0; j < ssd.dimV; ++j) CHECK(ssd2.circ[i][j] == ssd.circ[i][j]);
  }
}

TEST_CASE("a perturbed circle table fails the reconstruction jacobi audit") {
  auto ssd = data_for("sp_real:2");
  auto broken = ssd;
  broken.circ[0][0][0] += Rational(1);
  CHECK_THROWS_AS(reconstruct(broken), structural_fault);
}

TEST_CASE("weight audit for the split exceptional data") {
  auto b = build_algebra("g2_split");
  auto tg = grade(b.L, b.seed);
  auto ssd = extract(b.L, tg);
  auto cart = cartan_of_h(b, tg);
  REQUIRE(cart.size() == 1);
  auto wr = weight_audit(ssd, cart);
  REQUIRE(wr.weights.size() == 4);
  CHECK(wr.all_multiplicity_one);
  CHECK(wr.closed_under_negation);
  CHECK(wr.partition_ok);
  CHECK(wr.partition_sizes.at(3) == 1);
  CHECK(wr.partition_sizes.at(-3) == 1);
  CHECK(wr.partition_sizes.at(1) == 1);
  CHECK(wr.partition_sizes.at(-1) == 1);
  CHECK(wr.eigenvalue_identity_ok);
  // weights of S^3 F^2 under the sl2 Cartan, up to a common scale: +-3, +-1
  std::vector<Rational> vals;
  for (const auto& w : wr.weights) vals.push_back(w[0]);
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == -vals[3]);
  CHECK(vals[1] == -vals[2]);
  CHECK(vals[3] == Rational(3) * vals[2]);
}

TEST_CASE("weight audit on a bi-lagrangian family") {
  auto b = build_algebra("sl_real:4");
  auto tg = grade(b.L, b.seed);
  auto ssd = extract(b.L, tg);
  auto cart = cartan_of_h(b, tg);
  REQUIRE(cart.size() == 2);
  auto wr = weight_audit(ssd, cart);
  CHECK(wr.weights.size() == 4);
  CHECK(wr.all_multiplicity_one);
  CHECK(wr.closed_under_negation);
  CHECK(wr.partition_ok);
  CHECK(wr.eigenvalue_identity_ok);
}

TEST_CASE("weight audit on a realified family runs over the gaussian scalars") {
  auto b = build_algebra("su:2,2");
  auto tg = grade(b.L, b.seed);
  auto ssd = extract(b.L, tg);
  auto cart = cartan_of_h(b, tg);
  REQUIRE(cart.size() == 2);
  // the compact Cartan acts with imaginary eigenvalues; complexify first
  std::vector<Vec<Gaussian>> cartc;
  for (const auto& c : cart) {
    Vec<Gaussian> g(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) g[i] = Gaussian(c[i]);
    cartc.push_back(std::move(g));
  }
  auto wr = weight_audit(complexify(ssd), cartc);
  CHECK(wr.weights.size() == 4);
  CHECK(wr.all_multiplicity_one);
  CHECK(wr.closed_under_negation);
  CHECK(wr.partition_ok);
  CHECK(wr.eigenvalue_identity_ok);
  // eigenvalues are purely imaginary gaussian rationals
  for (const auto& w : wr.weights)
    for (const auto& x : w) CHECK(is_zero(x.re));
}
