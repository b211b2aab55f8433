#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <random>

#include "sympcon/catalog.hpp"
#include "sympcon/json_io.hpp"

using namespace sympcon;

TEST_CASE("sl2 chevalley basics") {
  auto L = chevalley_algebra(build_root_system(RootKind::A, 1));
  REQUIRE(L.dim == 3);
  // B(H,H) = tr(ad H)^2 = 0 + 4 + 4 over the coroot basis element
  CHECK(L.killing[0][0] == Rational(8));
  CHECK(jacobi_audit(L));
}

TEST_CASE("chevalley dimensions and exactness") {
  auto c2 = chevalley_algebra(build_root_system(RootKind::C, 2));
  CHECK(c2.dim == 10);
  CHECK(jacobi_audit(c2));
  auto g2 = chevalley_algebra(build_root_system(RootKind::G2, 2));
  CHECK(g2.dim == 14);
  CHECK(jacobi_audit(g2));
  auto a2 = chevalley_algebra(build_root_system(RootKind::A, 2));
  CHECK(a2.dim == 8);
  CHECK(jacobi_audit(a2));

  // Cartan acts diagonally with the pairing integers.
  auto rs = build_root_system(RootKind::G2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t b = 0; b < rs.size(); ++b) {
      auto br = g2.bracket_basis(i, 2 + b);
      std::vector<int> alpha_i(2, 0);
      alpha_i[i] = 1;
      long expect = 0;
      for (int j = 0; j < 2; ++j)
        expect += rs.roots[b][j] * static_cast<long>(num(rs.cartan[j][i]));
      if (expect == 0) {
        CHECK(br.empty());
      } else {
        REQUIRE(br.size() == 1);
        CHECK(br[0].first == 2 + b);
        CHECK(br[0].second == Rational(expect));
      }
    }
}

TEST_CASE("antisymmetry and ad-invariance of the Killing form") {
  auto L = chevalley_algebra(build_root_system(RootKind::C, 2));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int t = 0; t < 10; ++t) {
    Vec<Rational> x(L.dim), y(L.dim), z(L.dim);
    for (auto& v : x) v = Rational(d(rng));
    for (auto& v : y) v = Rational(d(rng));
    for (auto& v : z) v = Rational(d(rng));
    CHECK(vec_is_zero(L.bracket(x, x)));
    CHECK(vec_add(L.bracket(x, y), L.bracket(y, x)) == zero_vec<Rational>(L.dim));
    CHECK(L.killing_form(L.bracket(x, y), z) == L.killing_form(x, L.bracket(y, z)));
  }
}

TEST_CASE("a perturbed structure constant breaks the jacobi audit") {
  auto L = chevalley_algebra(build_root_system(RootKind::C, 2));
  REQUIRE(jacobi_audit(L));
  // bump one nonzero entry
  for (auto& row : L.bracket_table) {
    for (auto& sv : row) {
      if (!sv.empty()) {
        sv[0].second += Rational(1);
        std::string w;
        CHECK_FALSE(jacobi_audit(L, &w));
        CHECK_FALSE(w.empty());
        return;
      }
    }
  }
  FAIL("no structure constant found");
}

TEST_CASE("matrix form dimensions") {
  CHECK(build_algebra("sl_real:3").L.dim == 8);
  CHECK(build_algebra("sp_real:2").L.dim == 10);
  CHECK(build_algebra("su:2,2").L.dim == 15);
  CHECK(build_algebra("su:1,2").L.dim == 8);
  CHECK(build_algebra("so_real:2,3").L.dim == 10);
  CHECK_THROWS_AS(build_algebra("su:0,1"), std::invalid_argument);
  CHECK_THROWS_AS(build_algebra("sp_real:0"), std::invalid_argument);
}

TEST_CASE("matrix forms are lie algebras with nondegenerate killing forms") {
  for (const char* spec : {"sl_real:3", "sp_real:2", "su:1,2", "su:2,2", "so_real:2,3"}) {
    auto b = build_algebra(spec);
    CHECK(jacobi_audit(b.L));
    CHECK(rank(b.L.killing) == b.L.dim);
  }
}

TEST_CASE("matrix bracket is the commutator") {
  auto b = build_algebra("sp_real:2");
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 5; ++t) {
    Vec<Rational> x(b.L.dim), y(b.L.dim);
    for (auto& v : x) v = Rational(d(rng));
    for (auto& v : y) v = Rational(d(rng));
    auto mx = model_matrix_of(b.L, x);
    auto my = model_matrix_of(b.L, y);
    auto mb = model_matrix_of(b.L, b.L.bracket(x, y));
    auto comm = mat_sub(mat_mul(mx, my), mat_mul(my, mx));
    CHECK(mb == comm);
  }
}

TEST_CASE("centralizer examples") {
  auto sp2 = build_algebra("sp_real:2");
  auto tg = grade(sp2.L, sp2.seed);
  CHECK(centralizer(sp2.L, tg.H).dim() == 4);  // the zero block of the grading
  CHECK(centralizer(sp2.L, zero_vec<Rational>(sp2.L.dim)).dim() == sp2.L.dim);
  CHECK(centralizer(sp2.L, tg.H).contains(tg.H));

  auto su22 = build_algebra("su:2,2");
  auto a = momentum_bochner(su22, 1, 1);
  CHECK(centralizer(su22.L, a).dim() == 7);
}

TEST_CASE("centralizer dimension is conjugation invariant") {
  auto sl3 = build_algebra("sl_real:3");
  Vec<Rational> a = model_coords_of(sl3.L, [] {
    Mat<Gaussian> m = zero_mat<Gaussian>(3, 3);
    m[0][0] = Gaussian(2);
    m[1][1] = Gaussian(-1);
    m[2][2] = Gaussian(-1);
    return m;
  }());
  // conjugate by the unipotent I + E_{12}
  Mat<Gaussian> g = identity_mat<Gaussian>(3), ginv = identity_mat<Gaussian>(3);
  g[0][1] = Gaussian(1);
  ginv[0][1] = Gaussian(-1);
  auto am = model_matrix_of(sl3.L, a);
  auto conj = mat_mul(mat_mul(g, am), ginv);
  auto a2 = model_coords_of(sl3.L, conj);
  CHECK(centralizer(sl3.L, a).dim() == centralizer(sl3.L, a2).dim());
  // and under positive rescaling
  CHECK(centralizer(sl3.L, vec_scale(a, Rational(7))).dim() == centralizer(sl3.L, a).dim());
}

TEST_CASE("killing ratio on subalgebras") {
  auto sp2 = build_algebra("sp_real:2");
  // the whole algebra is an ideal of itself: c = 1
  Mat<Rational> all;
  for (std::size_t i = 0; i < sp2.L.dim; ++i) all.push_back(sp2.L.basis_vector(i));
  CHECK(killing_ratio(sp2.L, Subspace<Rational>::from_vectors(sp2.L.dim, all)) == Rational(1));

  auto tg = grade(sp2.L, sp2.seed);
  Mat<Rational> sl2_rows = {tg.X, tg.H, tg.Y};
  auto c = killing_ratio(sp2.L, Subspace<Rational>::from_vectors(sp2.L.dim, sl2_rows));
  CHECK(c == Rational(2, 3));

  auto g2 = build_algebra("g2_split");
  auto tg2 = grade(g2.L, g2.seed);
  CHECK(killing_ratio(g2.L, tg2.h_block) == Rational(1, 6));

  // not a subalgebra: [e_+^2, e_- (x) x] = 2 e_+ (x) x escapes the span
  Mat<Rational> bad = {tg.X, tg.minus_partner[0]};
  auto sub = Subspace<Rational>::from_vectors(sp2.L.dim, bad);
  CHECK_THROWS_AS(killing_ratio(sp2.L, sub), std::domain_error);
}

TEST_CASE("structure constant cache round trip and corruption detection") {
  auto dir = std::filesystem::temp_directory_path() / "sympcon_cache_test";
  std::filesystem::remove_all(dir);
  AlgebraCache cache(dir);
  auto g2 = chevalley_algebra(build_root_system(RootKind::G2, 2));
  cache.store("chev_G22", g2);
  auto loaded = cache.load("chev_G22");
  REQUIRE(loaded.has_value());
  CHECK(loaded->dim == g2.dim);
  for (std::size_t i = 0; i < g2.dim; ++i)
    for (std::size_t j = i + 1; j < g2.dim; ++j)
      CHECK(densify(loaded->bracket_basis(i, j), g2.dim) ==
            densify(g2.bracket_basis(i, j), g2.dim));
  CHECK(loaded->killing == g2.killing);

  // corrupt the payload: hash check must reject it
  {
    auto path = cache.file_of("chev_G22");
    std::ifstream in(path);
    json j = json::parse(in);
    in.close();
    j["algebra"]["c"][0][2][0][1] = "9999";
    std::ofstream out(path);
    out << j.dump();
  }
  CHECK_FALSE(cache.load("chev_G22").has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("e-series forms are gated") {
  CHECK_THROWS_AS(build_algebra("chevalley:E6,6", false), std::invalid_argument);
}
