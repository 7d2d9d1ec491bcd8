#ifndef DUALMOD_MANIFOLD_HPP
#define DUALMOD_MANIFOLD_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dualmod/diff.hpp"

namespace dualmod {

/// One chart of an atlas on a subset of an ambient module. `forward` maps the
/// ambient (N,M)-module to the model (n,m)-module, `inverse` goes back, and
/// `domain` is a predicate on ambient points (see satisfies()).
struct Chart {
  std::vector<Index> label;
  ExprFunction forward;
  ExprFunction inverse;
  ExprFunction domain;
};

/// Transition between two charts with its domain predicate on the model space.
struct Transition {
  ExprFunction map;
  ExprFunction domain;
};

/// A collection of charts plus the hooks the checker needs: how to decide
/// that two ambient points are the same point of the manifold, and optionally
/// how to draw ambient points and chart transitions directly.
struct Atlas {
  Index n = 0, m = 0;                  ///< model shape
  Index ambient_n = 0, ambient_m = 0;  ///< shape of the ambient module
  std::vector<Chart> charts;
  std::function<bool(const DualVec&, const DualVec&, double)> same_point;
  std::function<DualVec(std::mt19937_64&)> sample_point;
  std::function<Transition(std::size_t, std::size_t)> transition;
};

/// Per-axiom outcome. Axiom (i): coverage, (ii): open images, (iii):
/// injectivity, (iv): smooth transitions.
struct AxiomCheck {
  std::string axiom;
  std::vector<std::vector<Index>> chart_pair;
  bool passed = true;
  std::size_t samples = 0;
  double worst = 0;
  std::optional<DualVec> witness;
  std::string detail;
};

struct AtlasReport {
  std::vector<AxiomCheck> checks;
  bool passed() const;
};

struct AtlasCheckOptions {
  std::size_t samples = 100;
  double tol = kDefaultCrTolerance;
  double fd_step = kDefaultFdStep;
  std::uint64_t seed = 0;
  std::size_t max_attempts_factor = 50;
  /// Transition sample points must satisfy the domain predicate with this
  /// margin (every predicate component has |Re| >= margin).
  double domain_margin = 0.1;
};

AtlasReport verify_atlas(const Atlas& atlas, const AtlasCheckOptions& options = {});

/// The projective (n,m)-space: classes of points of the (n+1, m+1)-module
/// outside V (all head coordinates zero divisors) and W (all tail coordinates
/// zero) under x ~ (s x_head | t x_tail) with Re s != 0 and real t != 0.
///
/// Head slots are 0..n and tail slots 0..m of the ambient module.
class ProjectiveSpace {
 public:
  ProjectiveSpace(Index n, Index m);

  Index n() const { return n_; }
  Index m() const { return m_; }

  bool is_valid_rep(const DualVec& x, double tol = default_tolerance()) const;
  bool equivalent(const DualVec& x, const DualVec& y, double tol = 1e-10) const;
  /// Head scaled so its first slot of largest |re| becomes exactly 1, tail
  /// scaled so its first slot of largest |entry| becomes exactly 1.
  DualVec canonical_rep(const DualVec& x) const;

  bool in_chart(Index i, Index j, const DualVec& x, double tol = default_tolerance()) const;
  /// phi_ij: the head ratios x^k / x^i (k != i) and tail ratios x^l / x^j
  /// (l != j) in the (n,m)-module.
  DualVec chart_map(Index i, Index j, const DualVec& x) const;
  /// Inserts 1 at head slot i and 1^# at tail slot j.
  DualVec chart_inverse(Index i, Index j, const DualVec& u) const;

  /// phi_kl o phi_ij^{-1} as an expression over the model module.
  Transition transition(Index i, Index j, Index k, Index l) const;

  /// phi_ij and its inverse as expression functions.
  Chart chart(Index i, Index j) const;
  Atlas atlas() const;

  /// Uniformly-ish random valid representative.
  DualVec random_rep(std::mt19937_64& rng) const;

 private:
  void check_ambient(const DualVec& x) const;
  void check_chart_index(Index i, Index j) const;
  void require_valid(const DualVec& x) const;

  Index n_, m_;
};

/// Wraps a representative after validating it.
class ProjectivePoint {
 public:
  ProjectivePoint(const ProjectiveSpace& space, DualVec rep);
  const DualVec& rep() const { return rep_; }

 private:
  DualVec rep_;
};

}  // namespace dualmod

#endif  // DUALMOD_MANIFOLD_HPP
