#include <doctest.h>

#include "dualmod/manifold.hpp"
#include "dualmod/random.hpp"

using namespace dualmod;

namespace {

// Ambient representative from head entries and real tail coefficients.
DualVec rep(std::initializer_list<Dual> head, std::initializer_list<double> tail) {
  DualVec v(static_cast<Index>(head.size()), static_cast<Index>(tail.size()));
  Index i = 0;
  for (const auto& x : head) v.set_head(i++, x);
  Index j = 0;
  for (double t : tail) v.tail(j++) = t;
  return v;
}

bool all_passed(const AtlasReport& r) {
  bool ok = true;
  for (const auto& c : r.checks) {
    if (!c.passed) {
      MESSAGE("axiom " << c.axiom << " failed: " << c.detail << " worst " << c.worst);
      ok = false;
    }
  }
  return ok;
}

}  // namespace

TEST_CASE("valid representatives") {
  const ProjectiveSpace p00(0, 0), p10(1, 0);
  CHECK(p00.is_valid_rep(rep({Dual(1, 0)}, {1.0})));
  CHECK_FALSE(p00.is_valid_rep(rep({Dual(0, 1)}, {1.0})));
  CHECK_FALSE(p10.is_valid_rep(rep({Dual(1, 0), Dual(2, 1)}, {0.0})));
  CHECK_THROWS_AS(ProjectivePoint(p00, rep({Dual(0, 1)}, {1.0})), Error);
  try {
    ProjectivePoint(p10, rep({Dual(1, 0), Dual(2, 1)}, {0.0}));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_representative);
  }
  CHECK_THROWS_AS(p10.is_valid_rep(rep({Dual(1, 0)}, {1.0})), Error);
}

TEST_CASE("equivalence") {
  const ProjectiveSpace p(1, 0);
  const DualVec x = rep({Dual(1, 0), Dual(1, 0)}, {1.0});
  CHECK(p.equivalent(x, x));
  CHECK(p.equivalent(x, rep({Dual(2, 1), Dual(2, 1)}, {3.0})));
  CHECK_FALSE(p.equivalent(x, rep({Dual(1, 0), Dual(2, 0)}, {1.0})));
  // Head and tail scale independently; the tail may flip sign.
  CHECK(p.equivalent(x, rep({Dual(-1, 5), Dual(-1, 5)}, {-0.25})));
  CHECK_THROWS_AS(p.equivalent(x, rep({Dual(0, 1), Dual(0, 1)}, {1.0})), Error);
}

TEST_CASE("canonical representative") {
  const ProjectiveSpace p(1, 0);
  const DualVec c = p.canonical_rep(rep({Dual(2, 1), Dual(1, 0)}, {3.0}));
  CHECK(c.head(0) == Dual(1, 0));
  CHECK(approx_equal(c.head(1), Dual(0.5, -0.25), 1e-15));
  CHECK(c.tail(0) == 1.0);
  CHECK(approx_equal(p.canonical_rep(c), c, 0.0));
  const DualVec a = rep({Dual(1, 0), Dual(1, 0)}, {1.0});
  const DualVec b = rep({Dual(2, 1), Dual(2, 1)}, {3.0});
  CHECK(approx_equal(p.canonical_rep(a), p.canonical_rep(b), 1e-15));
}

TEST_CASE("chart maps") {
  const ProjectiveSpace p(1, 0);
  const DualVec u = p.chart_map(0, 0, rep({Dual(2, 1), Dual(1, 0)}, {3.0}));
  CHECK(u.n() == 1);
  CHECK(u.m() == 0);
  CHECK(approx_equal(u.head(0), Dual(0.5, -0.25), 1e-15));
  CHECK(approx_equal(p.chart_map(0, 0, rep({Dual(1, 0), Dual(0, 0)}, {1.0})), DualVec::Zero(1, 0), 0.0));
  CHECK_THROWS_AS(p.chart_map(1, 0, rep({Dual(1, 0), Dual(0, 1)}, {1.0})), Error);
  try {
    p.chart_map(1, 0, rep({Dual(1, 0), Dual(0, 1)}, {1.0}));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_in_chart);
  }

  const ProjectiveSpace q(2, 1);
  // Slot i = 1 holds 1 and tail slot j = 0 holds 1^#: the rest is read off.
  const DualVec x = rep({Dual(3, 4), Dual(1, 0), Dual(-2, 7)}, {1.0, 5.0});
  const DualVec v = q.chart_map(1, 0, x);
  CHECK(v.head(0) == Dual(3, 4));
  CHECK(v.head(1) == Dual(-2, 7));
  CHECK(v.tail(0) == 5.0);
}

TEST_CASE("chart inverse") {
  const ProjectiveSpace p(2, 1);
  const DualVec x = p.chart_inverse(1, 1, DualVec::Zero(2, 1));
  CHECK(x.head(1) == Dual(1, 0));
  CHECK(x.tail(1) == 1.0);
  CHECK(x.head(0) == Dual(0, 0));
  CHECK(x.tail(0) == 0.0);

  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const DualVec u = random_vector(rng, 2, 1);
    for (Index i = 0; i <= 2; ++i) {
      for (Index j = 0; j <= 1; ++j) {
        const DualVec y = p.chart_inverse(i, j, u);
        CHECK(p.is_valid_rep(y));
        CHECK(approx_equal(p.chart_map(i, j, y), u, 1e-10));
      }
    }
  }
}

TEST_CASE("representative independence") {
  Rng rng(2);
  for (const auto& [n, m] : {std::pair<Index, Index>{0, 1}, {1, 0}, {1, 1}, {2, 1}}) {
    const ProjectiveSpace p(n, m);
    for (int k = 0; k < 200; ++k) {
      const DualVec x = p.random_rep(rng);
      const Dual s = random_invertible(rng, 0.5);
      const double t = k % 2 ? 1.7 : -0.6;
      const DualVec y(s.re * x.head_re(), s.re * x.head_ze() + s.ze * x.head_re(), t * x.tail());
      CHECK(p.equivalent(x, y));
      for (Index i = 0; i <= n; ++i) {
        for (Index j = 0; j <= m; ++j) {
          if (!p.in_chart(i, j, x, 1e-6)) continue;
          const DualVec u = p.chart_map(i, j, x);
          CHECK(approx_equal(u, p.chart_map(i, j, y), 1e-10 * std::max(1.0, max_abs_entry(u))));
        }
      }
    }
  }
}

TEST_CASE("transitions") {
  const ProjectiveSpace p(1, 0);
  const Transition same = p.transition(0, 0, 0, 0);
  Rng rng(3);
  const DualVec u = random_vector(rng, 1, 0);
  CHECK(approx_equal(same.map(u), u, 0.0));

  const Transition t = p.transition(0, 0, 1, 0);
  DualVec w(1, 0);
  w.set_head(0, Dual(2, 3));
  CHECK(approx_equal(t.map(w).head(0), Dual(0.5, -0.75), 1e-15));

  const ProjectiveSpace q(2, 1);
  for (int k = 0; k < 50; ++k) {
    const DualVec x = q.random_rep(rng);
    for (Index i = 0; i <= 2; ++i) {
      for (Index j = 0; j <= 1; ++j) {
        for (Index a = 0; a <= 2; ++a) {
          for (Index b = 0; b <= 1; ++b) {
            if (!q.in_chart(i, j, x, 1e-3) || !q.in_chart(a, b, x, 1e-3)) continue;
            const DualVec v = q.chart_map(i, j, x);
            const DualVec there = q.transition(i, j, a, b).map(v);
            CHECK(approx_equal(there, q.chart_map(a, b, x), 1e-9 * (1 + max_abs_entry(there))));
            const DualVec back = q.transition(a, b, i, j).map(there);
            CHECK(approx_equal(back, v, 1e-9 * (1 + max_abs_entry(v))));
          }
        }
      }
    }
  }
}

TEST_CASE("projective atlases verify") {
  for (const auto& [n, m] : {std::pair<Index, Index>{0, 1}, {1, 0}, {1, 1}, {2, 1}}) {
    CAPTURE(n);
    CAPTURE(m);
    AtlasCheckOptions opts;
    opts.samples = 100;
    const auto report = verify_atlas(ProjectiveSpace(n, m).atlas(), opts);
    CHECK(all_passed(report));
    CHECK(report.passed());
  }
}

TEST_CASE("expression atlases") {
  Rng rng(4);
  const ModuleMapd iso = random_automorphism(rng, 1, 1);
  Atlas linear;
  linear.n = linear.m = linear.ambient_n = linear.ambient_m = 1;
  Chart ch;
  ch.label = {0};
  ch.forward = ExprFunction::from_module_map(iso);
  // Inverse from the realified inverse matrix.
  const RealMatrix inv_r = iso.realified().inverse();
  ch.inverse = ExprFunction::from_module_map(ModuleMapd::from_realified(inv_r, 1, 1, 1, 1));
  ch.domain = ExprFunction(1, 1, 0, 0, {});
  linear.charts = {ch};
  CHECK(verify_atlas(linear).passed());

  // A second chart whose forward map mixes in Re x breaks smoothness of the transition.
  Atlas broken = linear;
  Chart bad;
  bad.label = {1};
  const Expr x = Expr::coord(Part::head, 0);
  const Expr t = Expr::coord(Part::tail, 0);
  bad.forward = ExprFunction(1, 1, 1, 1, {x + re_part(x), t});
  // Inverse of x -> x + Re x: (a, b) -> (a/2, b).
  bad.inverse = ExprFunction(1, 1, 1, 1, {x - Expr::constant(Dual(0.5, 0)) * re_part(x), t});
  bad.domain = ExprFunction(1, 1, 0, 0, {});
  broken.charts.push_back(bad);
  const auto report = verify_atlas(broken);
  CHECK_FALSE(report.passed());
  bool iv_failed = false;
  for (const auto& c : report.checks) {
    if (c.axiom == "iv" && !c.passed) {
      iv_failed = true;
      CHECK(c.witness.has_value());
    }
    if (c.axiom != "iv") CHECK(c.passed);
  }
  CHECK(iv_failed);
}
