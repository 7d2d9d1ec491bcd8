#include "dualmod/diff.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dualmod {

namespace {

DualVec eval_probe(const ExprFunction& f, const DualVec& x) {
  try {
    return f.eval(x);
  } catch (const Error& e) {
    if (e.code() == Errc::not_invertible) {
      throw Error(Errc::evaluation_failed, "probe point hit a non-invertible inv argument");
    }
    throw;
  }
}

double block_max(const RealMatrix& j, Index r, Index c, Index rows, Index cols) {
  if (rows == 0 || cols == 0) return 0.0;
  return j.block(r, c, rows, cols).cwiseAbs().maxCoeff();
}

}  // namespace

double CrResiduals::max() const { return std::max({a, b, c, d}); }

RealMatrix numeric_jacobian(const ExprFunction& f, const DualVec& a, double h) {
  require_shape(a.n() == f.n() && a.m() == f.m(), "point does not match function domain");
  const RealVector x0 = realify(a);
  RealMatrix j(2 * f.s() + f.t(), x0.size());
  for (Index c = 0; c < x0.size(); ++c) {
    const double step = h * (1.0 + std::abs(x0[c]));
    RealVector xp = x0, xm = x0;
    xp[c] += step;
    xm[c] -= step;
    const RealVector fp = realify(eval_probe(f, unrealify(xp, a.n(), a.m())));
    const RealVector fm = realify(eval_probe(f, unrealify(xm, a.n(), a.m())));
    j.col(c) = (fp - fm) / (xp[c] - xm[c]);
  }
  return j;
}

RealMatrix ad_jacobian(const ExprFunction& f, const DualVec& a) {
  require_shape(a.n() == f.n() && a.m() == f.m(), "point does not match function domain");
  const Index dim = a.real_dim();
  RealMatrix j(2 * f.s() + f.t(), dim);
  for (Index c = 0; c < dim; ++c) {
    RealVector e = RealVector::Zero(dim);
    e[c] = 1.0;
    j.col(c) = realify(f.eval_jet(a, unrealify(e, a.n(), a.m())).second);
  }
  return j;
}

CrResiduals cr_residuals(const RealMatrix& j, Index n, Index m, Index s, Index t) {
  require_shape(j.rows() == 2 * s + t && j.cols() == 2 * n + m, "Jacobian has the wrong shape");
  CrResiduals r;
  r.a = block_max(j, 0, n, s, n);
  if (s > 0 && n > 0) {
    r.b = (j.block(s, n, s, n) - j.block(0, 0, s, n)).cwiseAbs().maxCoeff();
  }
  r.c = block_max(j, 0, 2 * n, s, m);
  r.d = block_max(j, 2 * s, n, t, n);
  return r;
}

CrReport cr_check(const ExprFunction& f, const DualVec& a, double tol, double h) {
  CrReport report;
  report.point = a;
  report.tolerance = tol;
  report.jacobian = numeric_jacobian(f, a, h);
  report.residuals = cr_residuals(report.jacobian, f.n(), f.m(), f.s(), f.t());
  report.passed = report.residuals.max() <= tol;
  if (report.passed) {
    report.derivative = ModuleMapd::from_realified(report.jacobian, f.n(), f.m(), f.s(), f.t());
  }
  return report;
}

ModuleMapd forward_derivative(const ExprFunction& f, const DualVec& a) {
  return ModuleMapd::from_realified(ad_jacobian(f, a), f.n(), f.m(), f.s(), f.t());
}

LimitReport limit_check(const ExprFunction& f, const DualVec& a, const ModuleMapd& derivative,
                        double radius, int samples, double tol, int levels, std::uint64_t seed) {
  require_shape(derivative.n() == f.n() && derivative.m() == f.m() && derivative.s() == f.s() &&
                    derivative.t() == f.t(),
                "derivative shape does not match the function");
  if (samples < 1 || levels < 1 || !(radius > 0)) {
    throw std::invalid_argument("limit_check needs positive radius, samples and levels");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<DualVec> directions;
  for (int k = 0; k < samples; ++k) {
    RealVector u(a.real_dim());
    for (auto& x : u) x = normal(rng);
    DualVec d = unrealify(u, a.n(), a.m());
    const double len = vector_norm(d);
    if (len == 0.0) continue;
    directions.push_back(Dual(1.0 / len) * d);
  }

  const DualVec fa = eval_probe(f, a);
  LimitReport report;
  double r = radius;
  for (int level = 0; level < levels; ++level, r *= 0.5) {
    double worst = 0.0;
    for (const auto& d : directions) {
      const DualVec step = Dual(r) * d;
      const DualVec remainder = eval_probe(f, a + step) - fa - derivative.apply(step);
      worst = std::max(worst, vector_norm(remainder) / vector_norm(step));
    }
    report.radii.push_back(r);
    report.quotients.push_back(worst);
  }
  report.passed = report.quotients.back() <= tol;
  return report;
}

}  // namespace dualmod
