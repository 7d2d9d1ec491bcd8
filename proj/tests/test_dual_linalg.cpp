#include <doctest.h>

#include "dualmod/elimination.hpp"
#include "dualmod/random.hpp"
#include "oracles.hpp"

using namespace dualmod;

namespace {

using Vs = std::vector<DualVec>;

ModuleMapd scalar_map(const Dual& a) {
  return ModuleMapd(RealMatrix::Constant(1, 1, a.re), RealMatrix::Constant(1, 1, a.ze), RealMatrix(1, 0),
                    RealMatrix(0, 1), RealMatrix(0, 0));
}

DualVec standard(Index n, Index m, Index k) { return DualVec::Unit(n, m, k); }

}  // namespace

TEST_CASE("identity and sharp maps") {
  Rng rng(1);
  const auto id = ModuleMapd::Identity(2, 1);
  const auto sh = ModuleMapd::Sharp(2, 1);
  for (int k = 0; k < 100; ++k) {
    const DualVec v = random_vector(rng, 2, 1);
    CHECK(id(v) == v);
    CHECK(approx_equal(sh(v), sharp_action(v), 0.0));
  }
  CHECK(ModuleMapd::Sharp(1, 0)(standard(1, 0, 0)) == sharp_action(standard(1, 0, 0)));
}

TEST_CASE("tail columns land in Ker") {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const auto f = random_map(rng, 2, 2, 3, 2);
    for (Index j = 0; j < 2; ++j) CHECK(in_ker_sharp(f(standard(2, 2, 2 + j)), 0.0));
  }
}

TEST_CASE("maps commute with the scalar action") {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto f = random_map(rng, 2, 1, 3, 2);
    const DualVec v = random_vector(rng, 2, 1), w = random_vector(rng, 2, 1);
    const Dual a = random_dual(rng);
    CHECK(approx_equal(f(a * v + w), a * f(v) + f(w), 1e-13));
  }
}

TEST_CASE("compose") {
  Rng rng(4);
  const auto f = random_map(rng, 2, 1, 1, 2);
  CHECK(max_abs_diff(compose(ModuleMapd::Identity(1, 2), f), f) == 0.0);
  CHECK(max_abs_diff(compose(ModuleMapd::Sharp(2, 1), ModuleMapd::Sharp(2, 1)), ModuleMapd::Zero(2, 1, 2, 1)) == 0.0);
  for (int k = 0; k < 100; ++k) {
    const auto f1 = random_map(rng, 2, 1, 3, 2);
    const auto f2 = random_map(rng, 3, 2, 1, 1);
    const DualVec v = random_vector(rng, 2, 1);
    CHECK(approx_equal(compose(f2, f1)(v), f2(f1(v)), 1e-13));
  }
  CHECK_THROWS_AS(compose(f, f), Error);
}

TEST_CASE("realified map") {
  const DualVec e1 = standard(1, 1, 0);
  CHECK(realify(e1) == Eigen::Vector3d(1, 0, 0));
  CHECK(realify(Dual::sharp() * e1) == Eigen::Vector3d(0, 1, 0));
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto f = random_map(rng, 2, 2, 1, 3);
    const DualVec v = random_vector(rng, 2, 2);
    // Brute-force product of the written-out block matrix.
    const Eigen::VectorXd expect = realify_map(f) * realify(v);
    CHECK((realify(f(v)) - expect).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const auto c = scalar_map(Dual(2, 3)).realified();
  CHECK(c == (Eigen::Matrix2d() << 2, 0, 3, 2).finished());
  Rng rng2(6);
  const auto f = random_map(rng2, 2, 1, 2, 1);
  CHECK(max_abs_diff(ModuleMapd::from_realified(f.realified(), 2, 1, 2, 1), f) == 0.0);
}

TEST_CASE("independence") {
  for (Index n = 0; n <= 3; ++n) {
    for (Index m = 0; m <= 3; ++m) {
      std::vector<DualVec> s1, s2;
      for (Index k = 0; k < n; ++k) s1.push_back(standard(n, m, k));
      for (Index k = 0; k < m; ++k) s2.push_back(standard(n, m, n + k));
      CHECK(is_independent(s1, s2));
    }
  }
  const DualVec e1 = standard(1, 0, 0);
  CHECK_FALSE(is_independent(Vs{e1}, Vs{sharp_action(e1)}));
  CHECK(is_independent(Vs{}, Vs{}));
  CHECK_THROWS_AS(is_independent(Vs{}, Vs{e1}), Error);
  CHECK_FALSE(is_independent(Vs{e1, Dual(2, 1) * e1}, Vs{}));
}

TEST_CASE("extract_basis examples") {
  std::vector<DualVec> std21;
  for (Index k = 0; k < 3; ++k) std21.push_back(standard(2, 1, k));
  CHECK(extract_basis(std21).dimension() == std::pair<Index, Index>(2, 1));

  const DualVec e1 = standard(1, 0, 0);
  const auto b = extract_basis(Vs{sharp_action(e1)});
  CHECK(b.s1.empty());
  REQUIRE(b.s2.size() == 1);
  CHECK(in_im_sharp(b.s2[0]));
  CHECK(b.s2[0].head(0).ze != 0.0);

  CHECK(extract_basis(Vs{e1, sharp_action(e1)}).dimension() == std::pair<Index, Index>(1, 0));
  CHECK(extract_basis(Vs{}).dimension() == std::pair<Index, Index>(0, 0));
  CHECK(extract_basis(Vs{DualVec::Zero(2, 2)}).dimension() == std::pair<Index, Index>(0, 0));
  CHECK_THROWS_AS(extract_basis(Vs{e1, standard(0, 1, 0)}), Error);
}

TEST_CASE("free module dimension") {
  for (Index n = 0; n <= 4; ++n) {
    for (Index m = 0; m <= 4; ++m) {
      std::vector<DualVec> gens;
      for (Index k = 0; k < n + m; ++k) gens.push_back(standard(n, m, k));
      CHECK(extract_basis(gens).dimension() == std::pair<Index, Index>(n, m));
    }
  }
}

TEST_CASE("extract_basis agrees with the realification oracle") {
  Rng rng(7);
  for (int k = 0; k < 300; ++k) {
    const Index n = 1 + k % 3, m = (k / 3) % 3;
    const auto gens = random_generators(rng, n, m);
    const auto basis = extract_basis(gens);
    CAPTURE(k);
    CHECK(basis.dimension() == oracle::split_dimension(gens));
    CHECK(is_independent(basis));
    for (const auto& w : basis.s2) CHECK(in_ker_sharp(w, 1e-9));
    // Every generator lies in the span of the basis.
    std::vector<DualVec> joined(basis.s1);
    joined.insert(joined.end(), basis.s2.begin(), basis.s2.end());
    const Eigen::Index span = oracle::svd_rank(oracle::columns(joined, true, true));
    std::vector<DualVec> with_gens(joined);
    with_gens.insert(with_gens.end(), gens.begin(), gens.end());
    CHECK(oracle::svd_rank(oracle::columns(with_gens, true, true)) == span);
  }
}

TEST_CASE("isomorphism") {
  CHECK(is_isomorphism(ModuleMapd::Identity(2, 2)));
  CHECK_FALSE(is_isomorphism(ModuleMapd::Sharp(1, 0)));
  CHECK(is_isomorphism(scalar_map(Dual(2, 3))));
  CHECK_FALSE(is_isomorphism(scalar_map(Dual(0, 3))));
  CHECK_FALSE(is_isomorphism(ModuleMapd::Zero(1, 0, 0, 2)));
  Rng rng(8);
  for (int k = 0; k < 20; ++k) CHECK(is_isomorphism(random_automorphism(rng, 2, 2)));
}

TEST_CASE("solve") {
  Rng rng(9);
  const DualVec b = random_vector(rng, 2, 1);
  CHECK(approx_equal(solve(ModuleMapd::Identity(2, 1), b), b, 1e-14));

  const DualVec e1 = standard(1, 0, 0);
  const DualVec x = solve(ModuleMapd::Sharp(1, 0), sharp_action(e1));
  CHECK(approx_equal(sharp_action(x), sharp_action(e1), 1e-12));
  CHECK(x.head(0).re == doctest::Approx(1.0));

  try {
    solve(ModuleMapd::Sharp(1, 0), e1);
    FAIL("expected NoSolution");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_solution);
  }
  for (int k = 0; k < 50; ++k) {
    const auto f = random_map(rng, 3, 1, 2, 2);
    const DualVec rhs = f(random_vector(rng, 3, 1));
    CHECK(approx_equal(f(solve(f, rhs)), rhs, 1e-10));
  }
  CHECK_THROWS_AS(solve(ModuleMapd::Identity(1, 0), standard(0, 1, 0)), Error);
}

TEST_CASE("map from columns") {
  const DualVec e1 = standard(1, 1, 0), t = standard(1, 1, 1);
  const auto f = map_from_columns(Vs{e1}, Vs{t}, 1, 1);
  CHECK(max_abs_diff(f, ModuleMapd::Identity(1, 1)) == 0.0);
  CHECK_THROWS_AS(map_from_columns(Vs{e1}, Vs{e1}, 1, 1), Error);

  std::vector<DualVec> gens;
  for (Index k = 0; k < 3; ++k) gens.push_back(standard(2, 1, k));
  const auto basis = extract_basis(gens);
  CHECK(is_isomorphism(basis_map(basis, 2, 1)));
}
