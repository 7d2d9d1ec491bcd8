#include "dualmod/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dualmod/diff.hpp"
#include "dualmod/manifold.hpp"
#include "dualmod/random.hpp"
#include "dualmod/symplectic.hpp"

namespace dualmod {

namespace {

using Product = std::function<Dual(const Dual&, const Dual&)>;

Product product_for(const std::string& fault) {
  if (fault == "product_rule") {
    return [](const Dual& x, const Dual& y) { return Dual(x.re * y.re + x.ze * y.ze, x.re * y.ze + x.ze * y.re); };
  }
  if (!fault.empty()) throw Error(Errc::evaluation_failed, "unknown fault \"" + fault + "\"");
  return [](const Dual& x, const Dual& y) { return mul(x, y); };
}

double max_abs(const RealMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double dist(const Dual& a, const Dual& b) { return std::max(std::abs(a.re - b.re), std::abs(a.ze - b.ze)); }

// Tracks the worst residual over trials against a fixed threshold.
struct Tally {
  InvariantResult r;
  Tally(std::string module, std::string name, double threshold) {
    r.module = std::move(module);
    r.name = std::move(name);
    r.threshold = threshold;
  }
  void add(double residual) {
    ++r.trials;
    if (!(residual <= r.threshold)) r.passed = false;
    if (std::isnan(residual) || residual > r.worst) r.worst = std::isnan(residual) ? INFINITY : residual;
  }
  // Boolean trials count violations in `worst`.
  void check(bool ok) {
    ++r.trials;
    if (!ok) {
      r.passed = false;
      r.worst += 1;
    }
  }
};

Rng rng_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

std::size_t scaled(std::size_t samples, std::size_t factor, std::size_t cap) {
  return std::max<std::size_t>(1, std::min(samples * factor, cap));
}

// Rank of the real span of realify(v) for v in vs (and their 1^# multiples
// when with_sharp is set).
Index realified_rank(const std::vector<DualVec>& vs, bool sharp_only) {
  if (vs.empty()) return 0;
  const Index d = vs.front().real_dim();
  RealMatrix a(d, static_cast<Index>(vs.size() * (sharp_only ? 1 : 2)));
  Index col = 0;
  for (const auto& v : vs) {
    if (!sharp_only) a.col(col++) = realify(v);
    a.col(col++) = realify(sharp_action(v));
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(a);
  double scale = 0;
  for (const auto& v : vs) scale = std::max(scale, max_abs_entry(v));
  qr.setThreshold(1e-9 * std::max(1.0, scale) / std::max(1e-300, qr.maxPivot()));
  return qr.rank();
}

void scalar_suite(const SelftestConfig& cfg, std::vector<InvariantResult>& out, std::uint64_t& idx) {
  const Product prod = product_for(cfg.fault);
  const std::size_t trials = scaled(cfg.samples, 100, 10000);
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_core", "ring_laws", 1e-12);
    for (std::size_t k = 0; k < trials; ++k) {
      const Dual x = random_dual(rng), y = random_dual(rng), z = random_dual(rng);
      double r = dist(prod(prod(x, y), z), prod(x, prod(y, z)));
      r = std::max(r, dist(prod(x, y + z), prod(x, y) + prod(x, z)));
      r = std::max(r, dist(prod(x, y), prod(y, x)));
      t.add(r);
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_core", "sharp_nilpotent", 0.0);
    for (std::size_t k = 0; k < trials; ++k) {
      const Dual x = random_dual(rng);
      double r = dist(prod(Dual::sharp(), Dual::sharp()), Dual(0, 0));
      r = std::max(r, dist(prod(x, Dual::sharp()), Dual(0, x.re)));
      t.add(r);
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_core", "inverse_roundtrip", 1e-12);
    for (std::size_t k = 0; k < trials; ++k) {
      const Dual x = random_invertible(rng, 1e-3);
      const Dual y = inv(x);
      t.add(dist(prod(x, y), Dual(1, 0)) / std::max(1.0, scalar_norm(x) * scalar_norm(y)));
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_core", "norm_submultiplicative", 0.0);
    for (std::size_t k = 0; k < trials; ++k) {
      const Dual x = random_dual(rng, 10.0), y = random_dual(rng, 10.0);
      const double excess = scalar_norm(prod(x, y)) - scalar_norm(x) * scalar_norm(y);
      t.add(std::max(0.0, excess - 1e-12 * scalar_norm(x) * scalar_norm(y)));
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_core", "module_axioms", 1e-12);
    for (std::size_t k = 0; k < scaled(cfg.samples, 10, 1000); ++k) {
      const Index n = rng() % 4, m = rng() % 4;
      const Dual a = random_dual(rng), b = random_dual(rng);
      const DualVec v = random_vector(rng, n, m), w = random_vector(rng, n, m);
      double r = max_abs_entry(DualVec(mul(a, b) * v - a * (b * v)));
      r = std::max(r, max_abs_entry(DualVec(a * (v + w) - (a * v + a * w))));
      r = std::max(r, max_abs_entry(DualVec((a + b) * v - (a * v + b * v))));
      r = std::max(r, in_im_sharp(sharp_action(v), 0.0) ? 0.0 : 1.0);
      r = std::max(r, max_abs_entry(sharp_action(sharp_action(v))));
      t.add(r);
    }
    out.push_back(t.r);
  }
}

void linalg_suite(const SelftestConfig& cfg, std::vector<InvariantResult>& out, std::uint64_t& idx) {
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_linalg", "basis_matches_realified_rank", 0.0);
    for (std::size_t k = 0; k < scaled(cfg.samples, 5, 500); ++k) {
      const Index n = rng() % 4, m = rng() % 4;
      if (n + m == 0) continue;
      const auto gens = random_generators(rng, n, m);
      const auto basis = extract_basis(gens);
      const auto [d1, d2] = basis.dimension();
      const Index r_sharp = realified_rank(gens, true);
      const Index r_all = realified_rank(gens, false);
      bool ok = d1 == r_sharp && 2 * d1 + d2 == r_all;
      for (const auto& w : basis.s2) ok = ok && in_ker_sharp(w, 1e-9);
      t.check(ok);
    }
    out.push_back(t.r);
  }
  {
    Tally t("dual_linalg", "free_module_dimension", 0.0);
    for (Index n = 0; n <= 4; ++n) {
      for (Index m = 0; m <= 4; ++m) {
        std::vector<DualVec> units;
        for (Index k = 0; k < n + m; ++k) units.push_back(DualVec::Unit(n, m, k));
        const auto [d1, d2] = extract_basis(units).dimension();
        t.check(d1 == n && d2 == m);
      }
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_linalg", "map_realification", 1e-12);
    for (std::size_t k = 0; k < scaled(cfg.samples, 5, 500); ++k) {
      const Index n = rng() % 4, m = rng() % 4, s = rng() % 4, u = rng() % 4;
      const ModuleMapd f = random_map(rng, n, m, s, u);
      const ModuleMapd g = random_map(rng, s, u, 2, 1);
      const DualVec v = random_vector(rng, n, m);
      const Dual a = random_dual(rng);
      double r = max_abs(realify(f(v)) - f.realified() * realify(v));
      r = std::max(r, max_abs_entry(DualVec(f(a * v) - a * f(v))));
      r = std::max(r, max_abs_entry(DualVec(compose(g, f)(v) - g(f(v)))));
      t.add(r);
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_linalg", "solve_residual", 1e-9);
    for (std::size_t k = 0; k < scaled(cfg.samples, 2, 200); ++k) {
      const Index n = 1 + rng() % 3, m = rng() % 3;
      const ModuleMapd f = random_map(rng, n, m, n, m);
      const DualVec b = f(random_vector(rng, n, m));
      t.add(max_abs_entry(DualVec(f(solve(f, b)) - b)));
    }
    out.push_back(t.r);
  }
}

void diff_suite(const SelftestConfig& cfg, std::vector<InvariantResult>& out, std::uint64_t& idx) {
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_diff", "ad_matches_central_difference", 1e-5);
    for (std::size_t k = 0; k < scaled(cfg.samples, 1, 50); ++k) {
      const Index n = 1 + rng() % 2, m = rng() % 2;
      const ExprFunction f = random_function(rng, n, m, 1 + rng() % 2, rng() % 2, 6);
      const DualVec a = random_vector(rng, n, m);
      t.add(max_abs(ad_jacobian(f, a) - numeric_jacobian(f, a)));
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_diff", "cr_accepts_dual_functions", 0.0);
    for (std::size_t k = 0; k < scaled(cfg.samples, 1, 50); ++k) {
      const Index n = 1 + rng() % 2, m = rng() % 2;
      const ExprFunction f = random_function(rng, n, m, 1, m, 5);
      t.check(cr_check(f, random_vector(rng, n, m)).passed);
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_diff", "cr_rejects_part_nodes", 0.0);
    const ExprFunction re_fn(1, 0, 1, 0, {re_part(Expr::coord(Part::head, 0))});
    const ExprFunction ze_fn(1, 0, 1, 0, {ze_part(Expr::coord(Part::head, 0))});
    for (std::size_t k = 0; k < scaled(cfg.samples, 1, 20); ++k) {
      const DualVec a = random_vector(rng, 1, 0);
      for (const auto* f : {&re_fn, &ze_fn}) {
        const auto report = cr_check(*f, a);
        t.check(!report.passed && report.residuals.max() >= 0.5);
      }
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("dual_diff", "limit_quotient", 1e-3);
    for (std::size_t k = 0; k < scaled(cfg.samples, 1, 10); ++k) {
      const Index n = 1 + rng() % 2, m = rng() % 2;
      const ExprFunction f = random_function(rng, n, m, 1, m, 4);
      const DualVec a = random_vector(rng, n, m);
      const auto report = limit_check(f, a, forward_derivative(f, a), 1e-1, 8, 1e-3, 10, rng());
      t.add(report.quotients.back());
    }
    out.push_back(t.r);
  }
}

void manifold_suite(const SelftestConfig& cfg, std::vector<InvariantResult>& out, std::uint64_t& idx) {
  const std::pair<Index, Index> shapes[] = {{0, 1}, {1, 0}, {1, 1}, {2, 1}};
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("manifold", "chart_roundtrip", 1e-10);
    for (const auto& [n, m] : shapes) {
      const ProjectiveSpace space(n, m);
      for (std::size_t k = 0; k < scaled(cfg.samples, 1, 100); ++k) {
        const DualVec x = space.random_rep(rng);
        for (Index i = 0; i <= n; ++i) {
          for (Index j = 0; j <= m; ++j) {
            if (!space.in_chart(i, j, x, 1e-6)) continue;
            const DualVec u = space.chart_map(i, j, x);
            const DualVec back = space.chart_inverse(i, j, u);
            t.add(space.equivalent(back, x) ? max_abs_entry(DualVec(space.chart_map(i, j, back) - u)) : 1.0);
          }
        }
      }
    }
    out.push_back(t.r);
  }
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("manifold", "representative_independence", 1e-10);
    for (const auto& [n, m] : shapes) {
      const ProjectiveSpace space(n, m);
      for (std::size_t k = 0; k < scaled(cfg.samples, 2, 200); ++k) {
        const DualVec x = space.random_rep(rng);
        const Dual s = random_invertible(rng, 0.5);
        const double r = std::uniform_real_distribution<double>(0.5, 2.0)(rng) * (rng() % 2 ? 1 : -1);
        const DualVec y(s.re * x.head_re(), s.re * x.head_ze() + s.ze * x.head_re(), r * x.tail());
        double worst = space.equivalent(x, y) ? 0.0 : 1.0;
        for (Index i = 0; i <= n; ++i) {
          for (Index j = 0; j <= m; ++j) {
            if (!space.in_chart(i, j, x, 1e-6)) continue;
            const DualVec u = space.chart_map(i, j, x);
            const double diff = max_abs_entry(DualVec(u - space.chart_map(i, j, y)));
            worst = std::max(worst, diff / std::max(1.0, max_abs_entry(u)));
          }
        }
        t.add(worst);
      }
    }
    out.push_back(t.r);
  }
  {
    Tally t("manifold", "projective_atlas_axioms", 0.0);
    for (const auto& [n, m] : shapes) {
      AtlasCheckOptions opts;
      opts.samples = scaled(cfg.samples, 1, 100);
      opts.seed = cfg.seed + static_cast<std::uint64_t>(idx++);
      const AtlasReport report = verify_atlas(ProjectiveSpace(n, m).atlas(), opts);
      for (const auto& c : report.checks) t.check(c.passed);
    }
    out.push_back(t.r);
  }
}

void symplectic_suite(const SelftestConfig& cfg, std::vector<InvariantResult>& out, std::uint64_t& idx) {
  const std::pair<Index, Index> shapes[] = {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 2}};
  {
    Rng rng = rng_for(cfg.seed, idx++);
    Tally t("symplectic", "darboux_random_forms", 0.0);
    for (const auto& [n, m] : shapes) {
      for (std::size_t k = 0; k < scaled(cfg.samples, 1, 20); ++k) {
        const GramForm g = random_form(n, m, rng());
        const DarbouxBasis b = darboux_basis(g);
        t.check(b.n() == n && b.m() == m && verify_darboux(b, g, 1e-9));
      }
    }
    out.push_back(t.r);
  }
  {
    Tally t("symplectic", "degenerate_forms_rejected", 0.0);
    GramForm no_re(2, 0, RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2));
    no_re.set_entry(0, 1, Dual::sharp());
    no_re.set_entry(1, 0, -Dual::sharp());
    const FormReport r_iv = check_form(no_re);
    t.check(r_iv.antisymmetric && !r_iv.nondegenerate_re && r_iv.witness_iv.has_value());
    const GramForm no_ze(0, 2, RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2));
    const FormReport r_v = check_form(no_ze);
    t.check(r_v.antisymmetric && r_v.nondegenerate_re && !r_v.nondegenerate_ze && r_v.witness_v.has_value());
    for (const auto& [n, m] : shapes) t.check(check_form(standard_form(n, m)).passed());
    out.push_back(t.r);
  }
}

}  // namespace

std::vector<InvariantResult> run_selftest(const SelftestConfig& config) {
  std::vector<InvariantResult> out;
  std::uint64_t idx = 0;
  scalar_suite(config, out, idx);
  linalg_suite(config, out, idx);
  diff_suite(config, out, idx);
  manifold_suite(config, out, idx);
  symplectic_suite(config, out, idx);
  return out;
}

}  // namespace dualmod
