#include <doctest.h>

#include <cmath>

#include "dualmod/diff.hpp"
#include "dualmod/random.hpp"

using namespace dualmod;

namespace {

Expr x0() { return Expr::coord(Part::head, 0); }

ExprFunction unary(const Expr& e) { return ExprFunction(1, 0, 1, 0, {e}); }

DualVec point(const Dual& a) {
  DualVec v(1, 0);
  v.set_head(0, a);
  return v;
}

double max_abs(const RealMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("expression evaluation") {
  CHECK(unary(x0() * x0())(point(Dual(1, 1))).head(0) == Dual(1, 2));
  const Dual a(0.3, -1.7);
  CHECK(unary(x0())(point(a)).head(0) == a);
  CHECK(approx_equal(unary(inv(x0()))(point(Dual(2, 3))).head(0), Dual(0.5, -0.75), 1e-15));
  CHECK(unary(sharp(x0()))(point(Dual(2, 3))).head(0) == Dual(0, 2));
  CHECK(unary(re_part(x0()))(point(Dual(2, 3))).head(0) == Dual(2, 0));
  CHECK(unary(ze_part(x0()))(point(Dual(2, 3))).head(0) == Dual(3, 0));
  CHECK(unary(-(x0() - Expr::constant(Dual(1, 1))))(point(Dual(2, 3))).head(0) == Dual(-1, -2));
}

TEST_CASE("tail coordinates read as multiples of 1^#") {
  DualVec v(0, 1);
  v.tail(0) = 4.0;
  CHECK(Expr::coord(Part::tail, 0).eval(v) == Dual(0, 4));
  CHECK(Expr::coord(Part::tail, 0, Component::ze).eval(v) == Dual(4, 0));
  CHECK(Expr::coord(Part::tail, 0, Component::re).eval(v) == Dual(0, 0));
  const ExprFunction f(0, 1, 0, 1, {Expr::constant(Dual(3, 1)) * Expr::coord(Part::tail, 0)});
  CHECK(f(v).tail(0) == 12.0);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(unary(inv(x0()))(point(Dual(0, 1))), Error);
  try {
    unary(inv(x0()))(point(Dual(0, 1)));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_invertible);
  }
  // A tail component with a real part is not an element of R 1^#.
  const ExprFunction bad(1, 0, 0, 1, {x0()});
  try {
    bad(point(Dual(1, 0)));
    FAIL("expected EvaluationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::evaluation_failed);
  }
  CHECK_THROWS_AS(unary(Expr::coord(Part::head, 3))(point(Dual(1, 0))), Error);
  CHECK_THROWS_AS(ExprFunction(1, 0, 2, 0, {x0()}), Error);
}

TEST_CASE("numeric jacobian") {
  const auto j = numeric_jacobian(unary(x0() * x0()), point(Dual(1, 0)));
  CHECK(max_abs(j - (Eigen::Matrix2d() << 2, 0, 0, 2).finished()) <= 1e-9);
  CHECK(max_abs(numeric_jacobian(unary(Expr::constant(Dual(3, 4))), point(Dual(1, 0)))) == 0.0);

  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const auto f = random_map(rng, 2, 1, 1, 2);
    const auto fe = ExprFunction::from_module_map(f);
    const DualVec a = random_vector(rng, 2, 1);
    CHECK(approx_equal(fe(a), f(a), 1e-13));
    CHECK(max_abs(numeric_jacobian(fe, a) - realify_map(f)) <= 1e-9);
  }
  CHECK_THROWS_AS(numeric_jacobian(unary(inv(x0())), point(Dual(0, 1))), Error);
}

TEST_CASE("forward mode matches central differences on random trees") {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const Index n = 1 + k % 2, m = k % 3 == 0 ? 1 : 0;
    const auto f = random_function(rng, n, m, 1 + k % 2, m, 6);
    const DualVec a = random_vector(rng, n, m);
    CAPTURE(k);
    CHECK(max_abs(ad_jacobian(f, a) - numeric_jacobian(f, a)) <= 1e-5);
  }
}

TEST_CASE("cr_check") {
  const auto sq = cr_check(unary(x0() * x0()), point(Dual(1, 1)));
  CHECK(sq.passed);
  REQUIRE(sq.derivative);
  CHECK(approx_equal(sq.derivative->c(0, 0), Dual(2, 2), 1e-8));

  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const DualVec a = point(random_dual(rng));
    const auto r = cr_check(unary(re_part(x0())), a);
    CHECK_FALSE(r.passed);
    CHECK(r.residuals.b == doctest::Approx(1.0).epsilon(1e-6));
    const auto z = cr_check(unary(ze_part(x0())), a);
    CHECK_FALSE(z.passed);
    CHECK(z.residuals.max() >= 0.5);
  }

  for (int k = 0; k < 10; ++k) {
    const auto f = random_map(rng, 2, 1, 2, 2);
    const auto r = cr_check(ExprFunction::from_module_map(f), random_vector(rng, 2, 1));
    REQUIRE(r.passed);
    CHECK(max_abs_diff(*r.derivative, f) <= 1e-8);
  }

  for (int k = 0; k < 20; ++k) {
    const auto f = random_function(rng, 2, 1, 1, 1, 5);
    CHECK(cr_check(f, random_vector(rng, 2, 1)).passed);
  }
}

TEST_CASE("cr residual blocks") {
  // Realified Jacobian of (x, 1^# t) -> Re x on R^(2)1,1 -> R^(2)1,0.
  RealMatrix j = RealMatrix::Zero(2, 3);
  j(0, 0) = 1;
  const auto r = cr_residuals(j, 1, 1, 1, 0);
  CHECK(r.a == 0.0);
  CHECK(r.b == 1.0);
  RealMatrix k = RealMatrix::Zero(3, 3);
  k(2, 1) = 0.5;  // tail output depending on a zero-divisor direction
  k(0, 2) = 0.25;  // real part depending on the tail
  const auto s = cr_residuals(k, 1, 1, 1, 1);
  CHECK(s.d == 0.5);
  CHECK(s.c == 0.25);
  CHECK_THROWS_AS(cr_residuals(k, 1, 0, 1, 1), Error);
}

TEST_CASE("forward derivative") {
  CHECK(approx_equal(forward_derivative(unary(x0() * x0()), point(Dual(1, 1))).c(0, 0), Dual(2, 2), 1e-15));
  CHECK(max_abs_diff(forward_derivative(unary(Expr::constant(Dual(1, 2))), point(Dual(1, 1))),
                     ModuleMapd::Zero(1, 0, 1, 0)) == 0.0);
  CHECK(approx_equal(forward_derivative(unary(inv(x0())), point(Dual(2, 0))).c(0, 0), Dual(-0.25, 0), 1e-15));

  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    const auto f = random_function(rng, 2, 1, 2, 1, 5);
    const DualVec a = random_vector(rng, 2, 1);
    const auto cr = cr_check(f, a);
    REQUIRE(cr.passed);
    CHECK(max_abs_diff(forward_derivative(f, a), *cr.derivative) <= 1e-4);
  }
}

TEST_CASE("limit_check") {
  const auto sq = unary(x0() * x0());
  const DualVec a = point(Dual(1, 0));
  const auto df = ModuleMapd::Scaling(1, 0, Dual(2, 0));
  const auto r = limit_check(sq, a, df, 0.1, 8, 1e-3);
  CHECK(r.passed);
  REQUIRE(r.quotients.size() == 10);
  for (std::size_t k = 1; k < r.quotients.size(); ++k) {
    CHECK(r.quotients[k] / r.quotients[k - 1] == doctest::Approx(0.5).epsilon(1e-6));
  }

  Rng rng(5);
  const auto lin = random_map(rng, 2, 1, 1, 1);
  const auto lr = limit_check(ExprFunction::from_module_map(lin), random_vector(rng, 2, 1), lin, 0.1, 8, 1e-3);
  CHECK(lr.passed);
  for (double q : lr.quotients) CHECK(q <= 1e-9);

  // re_part has real Jacobian diag(1, 0); the closest module maps miss it by a
  // fixed fraction in every direction.
  const auto re = unary(re_part(x0()));
  for (const Dual c : {Dual(1, 0), Dual(0.5, 0), Dual(0, 0), Dual(1, 1)}) {
    const auto bad = limit_check(re, a, ModuleMapd::Scaling(1, 0, c), 0.1, 16, 1e-3, 10, 7);
    CHECK_FALSE(bad.passed);
    CHECK(bad.quotients.back() > 0.1);
  }

  for (int k = 0; k < 10; ++k) {
    const auto f = random_function(rng, 2, 1, 1, 1, 4);
    const DualVec p = random_vector(rng, 2, 1);
    const auto cr = cr_check(f, p);
    REQUIRE(cr.passed);
    CHECK(limit_check(f, p, *cr.derivative, 0.1, 8, 1e-3).passed);
  }
  CHECK_THROWS(limit_check(sq, a, df, 0.0, 8, 1e-3));
}

TEST_CASE("composition and substitution") {
  Rng rng(6);
  for (int k = 0; k < 30; ++k) {
    const auto inner = random_function(rng, 2, 1, 1, 1, 4);
    const auto outer = random_function(rng, 1, 1, 2, 1, 4);
    const DualVec a = random_vector(rng, 2, 1);
    CHECK(approx_equal(compose(outer, inner)(a), outer(inner(a)), 1e-9 * (1 + max_abs_entry(outer(inner(a))))));
  }
  const auto id = ExprFunction::identity(2, 1);
  const DualVec a = random_vector(rng, 2, 1);
  CHECK(approx_equal(id(a), a, 0.0));
}

TEST_CASE("expression metadata") {
  const Expr e = inv(Expr::constant(Dual(1, 0)) + x0() * x0());
  CHECK(e.depth() == 4);
  CHECK(e.free_of_part_nodes());
  CHECK_FALSE(re_part(e).free_of_part_nodes());
  CHECK(e.op() == Op::inv);
  CHECK(std::string(op_name(Op::mul)) == "mul");
  Rng rng(7);
  for (int k = 0; k < 50; ++k) CHECK(random_expr(rng, 2, 1, 6).depth() <= 6);
}
