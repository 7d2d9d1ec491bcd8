#ifndef DUALMOD_RANDOM_HPP
#define DUALMOD_RANDOM_HPP

#include <random>
#include <vector>

#include "dualmod/expr.hpp"

namespace dualmod {

// Seeded generators for property tests and the selftest runner.

using Rng = std::mt19937_64;

Dual random_dual(Rng& rng, double scale = 1.0);
/// Random dual with |re| >= min_re.
Dual random_invertible(Rng& rng, double min_re = 0.1);
DualVec random_vector(Rng& rng, Index n, Index m, double scale = 1.0);
ModuleMapd random_map(Rng& rng, Index n, Index m, Index s, Index t);
/// Random automorphism with well-conditioned realification.
ModuleMapd random_automorphism(Rng& rng, Index n, Index m);

/// Generator families mixing generic vectors, 1^#-multiples, pure tail
/// vectors, dual combinations of earlier members and small-integer vectors.
std::vector<DualVec> random_generators(Rng& rng, Index n, Index m);

/// Random expression of the given maximum depth built from const, coord,
/// add, sub, mul, neg, sharp and inv; inv is only applied to arguments of the
/// form c + e e with Re c >= 1, so evaluation never fails.
Expr random_expr(Rng& rng, Index n, Index m, int depth);

/// Random dual-differentiable function; tail components are wrapped in sharp.
ExprFunction random_function(Rng& rng, Index n, Index m, Index s, Index t, int depth);

}  // namespace dualmod

#endif  // DUALMOD_RANDOM_HPP
