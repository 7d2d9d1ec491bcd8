#ifndef DUALMOD_DIFF_HPP
#define DUALMOD_DIFF_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dualmod/expr.hpp"

namespace dualmod {

inline constexpr double kDefaultFdStep = 1e-5;
inline constexpr double kDefaultCrTolerance = 1e-4;

/// Central-difference Jacobian of the realified function, (2s+t) x (2n+m).
/// The step on coordinate c is h (1 + |a_c|).
RealMatrix numeric_jacobian(const ExprFunction& f, const DualVec& a, double h = kDefaultFdStep);

/// Same Jacobian by forward-mode evaluation, one real direction per column.
RealMatrix ad_jacobian(const ExprFunction& f, const DualVec& a);

/// Maximum violations of the conditions that make a realified Jacobian the
/// realification of a module map (commutation with 1^#):
///   a  d(Re f^k)/d(x^{i2}) = 0
///   b  d(Ze f^k)/d(x^{i2}) = d(Re f^k)/d(x^{i1})
///   c  d(Re f^k)/d(x^{n+j}) = 0
///   d  d(f^{s+l})/d(x^{i2}) = 0
/// The remaining realified blocks ([0 C_re 0] rows etc.) follow from these.
struct CrResiduals {
  double a = 0, b = 0, c = 0, d = 0;
  double max() const;
};

CrResiduals cr_residuals(const RealMatrix& jacobian, Index n, Index m, Index s, Index t);

struct CrReport {
  DualVec point;
  bool passed = false;
  double tolerance = 0;
  CrResiduals residuals;
  RealMatrix jacobian;
  std::optional<ModuleMapd> derivative;  ///< present iff passed
};

/// Decides dual real differentiability at a from the structure of the
/// numerical Jacobian, and assembles the derivative when it passes.
CrReport cr_check(const ExprFunction& f, const DualVec& a, double tol = kDefaultCrTolerance,
                  double h = kDefaultFdStep);

/// Derivative as a module map by forward-mode AD. f is expected to be dual
/// differentiable at a; otherwise this returns the module-map blocks of the
/// real Jacobian, which cr_check would reject.
ModuleMapd forward_derivative(const ExprFunction& f, const DualVec& a);

struct LimitReport {
  std::vector<double> radii;
  std::vector<double> quotients;  ///< worst |f(x)-f(a)-Df(x-a)| / |x-a| per radius
  bool passed = false;
};

/// Samples the difference quotient of the derivative definition on random
/// directions at radii r, r/2, r/4, ... and passes when the quotient at the
/// smallest radius is at most tol.
LimitReport limit_check(const ExprFunction& f, const DualVec& a, const ModuleMapd& derivative,
                        double radius, int samples, double tol, int levels = 10,
                        std::uint64_t seed = 0);

}  // namespace dualmod

#endif  // DUALMOD_DIFF_HPP
