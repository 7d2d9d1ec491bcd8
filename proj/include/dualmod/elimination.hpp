#ifndef DUALMOD_ELIMINATION_HPP
#define DUALMOD_ELIMINATION_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <utility>
#include <vector>

#include "dualmod/module_map.hpp"

namespace dualmod {

/// Split basis (S1 || S2): dual coefficients on S1, real coefficients on S2,
/// with every S2 member in Ker 1^#.
template <typename Scalar>
struct SplitBasis {
  std::vector<DualVector<Scalar>> s1;
  std::vector<DualVector<Scalar>> s2;

  /// The R^(2)-dimension (|S1|, |S2|).
  std::pair<Index, Index> dimension() const {
    return {static_cast<Index>(s1.size()), static_cast<Index>(s2.size())};
  }
};

using SplitBasisd = SplitBasis<double>;

namespace detail {

template <typename Scalar>
Scalar family_scale(const std::vector<DualVector<Scalar>>& vs) {
  Scalar scale(0);
  for (const auto& v : vs) scale = std::max(scale, max_abs_entry(v));
  return scale;
}

}  // namespace detail

/// Constructive split basis of the submodule generated by `generators`.
///
/// Phase 1 eliminates with invertible pivots only (largest |re| relative to
/// its row scale); each pivot row, normalised to 1 at the pivot, joins S1.
/// Once no head entry with |re| above the threshold remains, every leftover
/// row is 1^# times a real vector; phase 2 runs real Gaussian elimination with
/// partial pivoting on those ze/tail coefficients and the echelon rows form S2.
///
/// A pivot is declared zero below rel_tol times the largest entry of the input.
template <typename Scalar>
SplitBasis<Scalar> extract_basis(const std::vector<DualVector<Scalar>>& generators,
                                 double rel_tol = default_tolerance()) {
  SplitBasis<Scalar> basis;
  if (generators.empty()) return basis;
  const Index n = generators.front().n();
  const Index m = generators.front().m();
  for (const auto& g : generators) require_shape(g.n() == n && g.m() == m, "generators differ in shape");

  const Scalar scale = detail::family_scale(generators);
  if (scale == Scalar(0)) return basis;
  const Scalar threshold = Scalar(rel_tol) * scale;

  std::vector<DualVector<Scalar>> rows(generators);
  std::vector<bool> used_col(static_cast<std::size_t>(n), false);

  // Phase 1: invertible pivots.
  for (;;) {
    std::size_t best_row = rows.size();
    Index best_col = -1;
    Scalar best_score(0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Scalar row_scale = max_abs_entry(rows[r]);
      if (row_scale <= threshold) continue;
      for (Index c = 0; c < n; ++c) {
        if (used_col[static_cast<std::size_t>(c)]) continue;
        const Scalar a = std::abs(rows[r].head_re()[c]);
        if (a <= threshold) continue;
        const Scalar score = a / row_scale;
        if (score > best_score) {
          best_score = score;
          best_row = r;
          best_col = c;
        }
      }
    }
    if (best_row == rows.size()) break;

    DualVector<Scalar> pivot = inv(rows[best_row].head(best_col), 0.0) * rows[best_row];
    pivot.set_head(best_col, DualNumber<Scalar>(1));
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best_row));
    for (auto& row : rows) {
      const DualNumber<Scalar> factor = row.head(best_col);
      row -= factor * pivot;
      row.set_head(best_col, DualNumber<Scalar>(0));
    }
    used_col[static_cast<std::size_t>(best_col)] = true;
    basis.s1.push_back(std::move(pivot));
  }

  // Phase 2: what is left is 1^# times the real vectors (head ze | tail).
  using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index k = static_cast<Index>(rows.size());
  RealMatrix w(k, n + m);
  for (Index r = 0; r < k; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    w.row(r) << row.head_ze().transpose(), row.tail().transpose();
  }
  Index rank = 0;
  for (Index c = 0; c < n + m && rank < k; ++c) {
    Index piv = rank;
    w.col(c).segment(rank, k - rank).cwiseAbs().maxCoeff(&piv);
    piv += rank;
    if (std::abs(w(piv, c)) <= threshold) continue;
    w.row(rank).swap(w.row(piv));
    w.row(rank) /= w(rank, c);
    for (Index r = 0; r < k; ++r) {
      if (r != rank && w(r, c) != Scalar(0)) {
        w.row(r) -= w(r, c) * w.row(rank);
        w(r, c) = Scalar(0);
      }
    }
    ++rank;
  }
  for (Index r = 0; r < rank; ++r) {
    using RV = typename DualVector<Scalar>::RealVector;
    basis.s2.emplace_back(RV::Zero(n), RV(w.row(r).segment(0, n).transpose()),
                          RV(w.row(r).segment(n, m).transpose()));
  }
  return basis;
}

/// (R^(2) || R)-linear independence of (S1 || S2).
template <typename Scalar>
bool is_independent(const std::vector<DualVector<Scalar>>& s1,
                    const std::vector<DualVector<Scalar>>& s2, double tol = default_tolerance()) {
  for (const auto& w : s2) {
    if (!in_ker_sharp(w, tol)) {
      throw Error(Errc::not_in_ker, "real-coefficient family member has a nonzero head real part");
    }
  }
  if (s1.empty() && s2.empty()) return true;
  std::vector<DualVector<Scalar>> all(s1);
  all.insert(all.end(), s2.begin(), s2.end());
  const auto [d1, d2] = extract_basis(all, tol).dimension();
  // Real rank of the generated submodule is 2 d1 + d2; independence means no
  // real relation among {v, 1^# v : v in S1} and S2.
  return 2 * d1 + d2 == 2 * static_cast<Index>(s1.size()) + static_cast<Index>(s2.size());
}

template <typename Scalar>
bool is_independent(const SplitBasis<Scalar>& b, double tol = default_tolerance()) {
  return is_independent(b.s1, b.s2, tol);
}

/// True iff the map is a module isomorphism: equal shapes and an invertible
/// realification.
template <typename Scalar>
bool is_isomorphism(const ModuleMap<Scalar>& f, double rel_tol = default_tolerance()) {
  if (f.n() != f.s() || f.m() != f.t()) return false;
  if (f.n() + f.m() == 0) return true;
  Eigen::FullPivLU<typename ModuleMap<Scalar>::RealMatrix> lu(f.realified());
  lu.setThreshold(rel_tol);
  return lu.rank() == 2 * f.n() + f.m();
}

/// One solution of f(v) = b: the minimum-norm solution of the realified
/// system, accepted when its residual is within tol (1 + |b|).
template <typename Scalar>
DualVector<Scalar> solve(const ModuleMap<Scalar>& f, const DualVector<Scalar>& b,
                         double tol = default_tolerance()) {
  require_shape(b.n() == f.s() && b.m() == f.t(), "right-hand side does not match map codomain");
  using RealMatrix = typename ModuleMap<Scalar>::RealMatrix;
  const RealMatrix a = f.realified();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  if (a.size() == 0) {
    x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(a.cols());
  } else {
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod;
    cod.setThreshold(tol);
    cod.compute(a);
    x = cod.solve(realify(b));
  }
  DualVector<Scalar> v = unrealify(x, f.n(), f.m());
  const Scalar residual = vector_norm(DualVector<Scalar>(f.apply(v) - b));
  if (!(residual <= Scalar(tol) * (Scalar(1) + vector_norm(b)))) {
    throw Error(Errc::no_solution, "realified system is inconsistent (residual " +
                                       std::to_string(static_cast<double>(residual)) + ")");
  }
  return v;
}

/// Map from the basis shape to the ambient module with columns S1 then S2.
template <typename Scalar>
ModuleMap<Scalar> basis_map(const SplitBasis<Scalar>& b, Index n, Index m,
                            double tol = default_tolerance()) {
  return map_from_columns(b.s1, b.s2, n, m, tol);
}

}  // namespace dualmod

#endif  // DUALMOD_ELIMINATION_HPP
