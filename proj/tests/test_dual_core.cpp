#include <doctest.h>

#include <cmath>
#include <random>

#include "dualmod/dual_vector.hpp"
#include "dualmod/random.hpp"

using namespace dualmod;

namespace {

bool same(const Dual& a, const Dual& b, double tol = 1e-15) { return approx_equal(a, b, tol); }

DualVec head_vec(std::initializer_list<Dual> head, std::initializer_list<double> tail = {}) {
  DualVec v(static_cast<Index>(head.size()), static_cast<Index>(tail.size()));
  Index i = 0;
  for (const auto& x : head) v.set_head(i++, x);
  Index j = 0;
  for (double t : tail) v.tail(j++) = t;
  return v;
}

}  // namespace

TEST_CASE("product") {
  CHECK(mul(Dual(1, 1), Dual(1, -1)) == Dual(1, 0));
  CHECK(mul(Dual(0, 1), Dual(0, 1)) == Dual(0, 0));
  CHECK(mul(Dual(2, 3), Dual(1, 0)) == Dual(2, 3));
  CHECK(Dual(2, 3) * Dual(4, -1) == Dual(8, 10));
}

TEST_CASE("inverse") {
  CHECK(same(inv(Dual(2, 3)), Dual(0.5, -0.75)));
  CHECK(inv(Dual(1, 0)) == Dual(1, 0));
  CHECK_THROWS_AS(inv(Dual(0, 1)), Error);
  try {
    inv(Dual(0, 1));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_invertible);
  }
  CHECK(is_zero_divisor(Dual(0, 2)));
  CHECK_FALSE(is_zero_divisor(Dual(0, 0)));
  CHECK_FALSE(is_invertible(Dual(1e-12, 1)));
  CHECK(is_invertible(Dual(1e-12, 1), 1e-13));
  CHECK(same(Dual(1, 0) / Dual(2, 3), Dual(0.5, -0.75)));
}

TEST_CASE("scalar norm") {
  CHECK(scalar_norm(Dual(1, 0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(scalar_norm(Dual(0, 0)) == 0.0);
  CHECK(scalar_norm(Dual(1, 1)) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("ring laws on random samples") {
  Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    const Dual x = random_dual(rng, 3), y = random_dual(rng, 3), z = random_dual(rng, 3);
    CHECK(same((x * y) * z, x * (y * z), 1e-12));
    CHECK(same(x * (y + z), x * y + x * z, 1e-12));
    CHECK(same(x * y, y * x, 0.0));
    CHECK(scalar_norm(x * y) <= scalar_norm(x) * scalar_norm(y) * (1 + 1e-14));
    if (std::abs(x.re) > 1e-6) {
      const Dual r = x * inv(x);
      CHECK(std::abs(r.re - 1) <= 1e-12);
      CHECK(std::abs(r.ze) <= 4e-16 * (1 + std::abs(x.ze / x.re)));
    }
  }
}

TEST_CASE("inner product and norm") {
  const auto e1 = DualVec::Unit(1, 0, 0);
  CHECK(inner(e1, e1) == 2.0);
  const auto t1 = DualVec::Unit(0, 1, 0);
  CHECK(inner(t1, t1) == 1.0);
  CHECK(inner(e1, Dual::sharp() * e1) == 0.0);
  CHECK(vector_norm(e1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(vector_norm(DualVec::Zero(2, 3)) == 0.0);
  CHECK(vector_norm(Dual(1, 1) * e1) == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(inner(e1, t1), Error);
}

TEST_CASE("vector norm matches scalar norms on the head") {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const DualVec v = random_vector(rng, 3, 2);
    double expect = 0;
    for (Index i = 0; i < 3; ++i) expect += std::pow(scalar_norm(v.head(i)), 2);
    for (Index j = 0; j < 2; ++j) expect += v.tail(j) * v.tail(j);
    CHECK(vector_norm(v) == doctest::Approx(std::sqrt(expect)).epsilon(1e-14));
  }
}

TEST_CASE("sharp action") {
  const auto e1 = DualVec::Unit(1, 1, 0);
  const auto t1 = DualVec::Unit(1, 1, 1);
  CHECK(sharp_action(e1) == head_vec({Dual(0, 1)}, {0.0}));
  CHECK(sharp_action(t1) == DualVec::Zero(1, 1));
  CHECK(sharp_action(head_vec({Dual(2, 3)})) == head_vec({Dual(0, 2)}));

  CHECK(in_ker_sharp(t1));
  CHECK_FALSE(in_im_sharp(t1));
  CHECK(in_ker_sharp(sharp_action(e1)));
  CHECK(in_im_sharp(sharp_action(e1)));
  CHECK_FALSE(in_ker_sharp(e1));
  CHECK_FALSE(in_im_sharp(e1));
}

TEST_CASE("scalar action on the tail uses the real part") {
  const DualVec v = head_vec({Dual(1, 2)}, {5.0});
  const DualVec w = Dual(3, 7) * v;
  CHECK(w.head(0) == Dual(3, 13));
  CHECK(w.tail(0) == 15.0);
  CHECK(scalar_mul(Dual(3, 7), v) == w);
}

TEST_CASE("module axioms hold on random samples") {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Index n = k % 4, m = (k / 4) % 3;
    const Dual a = random_dual(rng), b = random_dual(rng);
    const DualVec v = random_vector(rng, n, m), w = random_vector(rng, n, m);
    CHECK(approx_equal((a * b) * v, a * (b * v), 1e-14));
    CHECK(approx_equal(a * (v + w), a * v + a * w, 1e-14));
    CHECK(approx_equal((a + b) * v, a * v + b * v, 1e-14));
    CHECK(approx_equal(Dual::sharp() * v, sharp_action(v), 0.0));
  }
}

TEST_CASE("realification order and inverse") {
  const DualVec e1 = DualVec::Unit(1, 1, 0);
  CHECK(realify(e1) == Eigen::Vector3d(1, 0, 0));
  CHECK(realify(sharp_action(e1)) == Eigen::Vector3d(0, 1, 0));
  Rng rng(9);
  const DualVec v = random_vector(rng, 2, 3);
  CHECK(unrealify(realify(v), 2, 3) == v);
  CHECK_THROWS_AS(unrealify(Eigen::VectorXd::Zero(4), 2, 1), Error);
}

TEST_CASE("empty shapes are valid") {
  const DualVec z(0, 0);
  CHECK(z.real_dim() == 0);
  CHECK(vector_norm(z) == 0.0);
  CHECK(max_abs_entry(z) == 0.0);
  CHECK(in_im_sharp(z));
}

TEST_CASE("shape mismatch is reported") {
  CHECK_THROWS_AS(DualVec::Zero(1, 0) + DualVec::Zero(0, 1), Error);
  CHECK_THROWS_AS(DualVec::Unit(1, 1, 2), Error);
}

TEST_CASE("tolerance setting") {
  const double old = default_tolerance();
  set_default_tolerance(1e-6);
  CHECK_FALSE(is_invertible(Dual(1e-7, 0)));
  set_default_tolerance(old);
  CHECK(is_invertible(Dual(1e-7, 0)));
  CHECK_THROWS(set_default_tolerance(0.0));
  CHECK_THROWS(set_default_tolerance(-1.0));
}
