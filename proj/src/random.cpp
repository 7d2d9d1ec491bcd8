#include "dualmod/random.hpp"

namespace dualmod {

namespace {

double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(Rng& rng, int count) { return std::uniform_int_distribution<int>(0, count - 1)(rng); }

RealMatrix uniform_matrix(Rng& rng, Index r, Index c) {
  RealMatrix a(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) a(i, j) = uniform(rng);
  }
  return a;
}

RealMatrix conditioned(Rng& rng, Index size) {
  for (;;) {
    RealMatrix a = RealMatrix::Identity(size, size) + 0.5 * uniform_matrix(rng, size, size);
    if (size == 0) return a;
    Eigen::JacobiSVD<RealMatrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 0.2 * sv(0)) return a;
  }
}

}  // namespace

Dual random_dual(Rng& rng, double scale) { return {scale * uniform(rng), scale * uniform(rng)}; }

Dual random_invertible(Rng& rng, double min_re) {
  const double mag = uniform(rng, min_re, 1.0 + min_re);
  return {pick(rng, 2) == 0 ? mag : -mag, uniform(rng)};
}

DualVec random_vector(Rng& rng, Index n, Index m, double scale) {
  DualVec v(n, m);
  for (Index i = 0; i < n; ++i) v.set_head(i, random_dual(rng, scale));
  for (Index j = 0; j < m; ++j) v.tail(j) = scale * uniform(rng);
  return v;
}

ModuleMapd random_map(Rng& rng, Index n, Index m, Index s, Index t) {
  return ModuleMapd(uniform_matrix(rng, s, n), uniform_matrix(rng, s, n), uniform_matrix(rng, s, m),
                    uniform_matrix(rng, t, n), uniform_matrix(rng, t, m));
}

ModuleMapd random_automorphism(Rng& rng, Index n, Index m) {
  return ModuleMapd(conditioned(rng, n), uniform_matrix(rng, n, n), uniform_matrix(rng, n, m),
                    uniform_matrix(rng, m, n), conditioned(rng, m));
}

std::vector<DualVec> random_generators(Rng& rng, Index n, Index m) {
  const int count = 1 + pick(rng, static_cast<int>(n + m) + 3);
  std::vector<DualVec> gens;
  for (int k = 0; k < count; ++k) {
    switch (pick(rng, 5)) {
      case 0:  // generic
        gens.push_back(random_vector(rng, n, m));
        break;
      case 1:  // in Im 1^#
        gens.push_back(sharp_action(random_vector(rng, n, m)));
        break;
      case 2: {  // pure tail
        DualVec v(n, m);
        for (Index j = 0; j < m; ++j) v.tail(j) = uniform(rng);
        gens.push_back(v);
        break;
      }
      case 3: {  // dual combination of two earlier members
        if (gens.empty()) {
          gens.push_back(random_vector(rng, n, m));
        } else {
          const auto& a = gens[static_cast<std::size_t>(pick(rng, static_cast<int>(gens.size())))];
          const auto& b = gens[static_cast<std::size_t>(pick(rng, static_cast<int>(gens.size())))];
          const Dual ca = random_dual(rng);
          const Dual cb = random_dual(rng);
          gens.push_back(ca * a + cb * b);
        }
        break;
      }
      default: {  // sparse small integers
        DualVec v(n, m);
        for (Index i = 0; i < n; ++i) {
          v.set_head(i, Dual(pick(rng, 3) == 0 ? pick(rng, 5) - 2 : 0,
                             pick(rng, 3) == 0 ? pick(rng, 5) - 2 : 0));
        }
        for (Index j = 0; j < m; ++j) v.tail(j) = pick(rng, 3) == 0 ? pick(rng, 5) - 2 : 0;
        gens.push_back(v);
        break;
      }
    }
  }
  return gens;
}

Expr random_expr(Rng& rng, Index n, Index m, int depth) {
  auto leaf = [&]() {
    const int choice = pick(rng, 4);
    if (choice == 0 || n + m == 0) return Expr::constant(random_dual(rng));
    const auto slot = pick(rng, static_cast<int>(n + m));
    return slot < n ? Expr::coord(Part::head, slot) : Expr::coord(Part::tail, slot - n);
  };
  if (depth <= 1) return leaf();
  const int choice = pick(rng, 20);
  auto sub = [&]() { return random_expr(rng, n, m, depth - 1); };
  if (choice < 3) return leaf();
  if (choice < 14) {
    const Expr a = sub();
    const Expr b = sub();
    return choice < 8 ? a + b : choice < 10 ? a - b : a * b;
  }
  if (choice < 15) return -sub();
  if (choice < 17 || depth < 4) return sharp(sub());
  const Dual c(1.0 + uniform(rng, 0.0, 1.0), uniform(rng));
  const Expr e = random_expr(rng, n, m, depth - 3);
  return inv(Expr::constant(c) + e * e);
}

ExprFunction random_function(Rng& rng, Index n, Index m, Index s, Index t, int depth) {
  std::vector<Expr> comps;
  for (Index k = 0; k < s; ++k) comps.push_back(random_expr(rng, n, m, depth));
  for (Index l = 0; l < t; ++l) comps.push_back(sharp(random_expr(rng, n, m, depth - 1)));
  return ExprFunction(n, m, s, t, std::move(comps));
}

}  // namespace dualmod
