#ifndef DUALMOD_MODULE_MAP_HPP
#define DUALMOD_MODULE_MAP_HPP

#include <Eigen/Dense>
#include <vector>

#include "dualmod/dual_vector.hpp"

namespace dualmod {

/// R^(2)-linear map from the (n,m)-module to the (s,t)-module in block form.
///
///   C  (s x n, dual)  head -> head, the head parts of lambda(e_i)
///   P  (s x m, real)  tail -> head, 1^# coefficients of lambda(e_{n+j}) heads
///   D  (t x n, real)  head -> tail
///   Q  (t x m, real)  tail -> tail
///
/// lambda(e_{n+j}) lies in Ker 1^#, hence the real P and Q. Every R^(2)-linear
/// map has exactly one such representation.
template <typename Scalar>
class ModuleMap {
 public:
  using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = DualVector<Scalar>;
  using Number = DualNumber<Scalar>;

  ModuleMap() = default;
  ModuleMap(Index n, Index m, Index s, Index t)
      : c_re_(RealMatrix::Zero(s, n)),
        c_ze_(RealMatrix::Zero(s, n)),
        p_(RealMatrix::Zero(s, m)),
        d_(RealMatrix::Zero(t, n)),
        q_(RealMatrix::Zero(t, m)) {}
  ModuleMap(RealMatrix c_re, RealMatrix c_ze, RealMatrix p, RealMatrix d, RealMatrix q)
      : c_re_(std::move(c_re)), c_ze_(std::move(c_ze)), p_(std::move(p)), d_(std::move(d)),
        q_(std::move(q)) {
    require_shape(c_re_.rows() == c_ze_.rows() && c_re_.cols() == c_ze_.cols(),
                  "C real and zero-divisor parts differ in shape");
    require_shape(p_.rows() == c_re_.rows() && d_.cols() == c_re_.cols() &&
                      q_.rows() == d_.rows() && q_.cols() == p_.cols(),
                  "inconsistent block shapes");
  }

  static ModuleMap Zero(Index n, Index m, Index s, Index t) { return ModuleMap(n, m, s, t); }

  static ModuleMap Identity(Index n, Index m) { return Scaling(n, m, Number(1)); }

  /// v -> a v.
  static ModuleMap Scaling(Index n, Index m, const Number& a) {
    ModuleMap f(n, m, n, m);
    f.c_re_.diagonal().setConstant(a.re);
    f.c_ze_.diagonal().setConstant(a.ze);
    f.q_.diagonal().setConstant(a.re);
    return f;
  }

  /// Multiplication by 1^# as a module endomorphism.
  static ModuleMap Sharp(Index n, Index m) { return Scaling(n, m, Number::sharp()); }

  /// Rebuilds the map from its realification. Only the blocks that carry
  /// information are read; the others are assumed to have the structure
  /// enforced by realified().
  template <typename Derived>
  static ModuleMap from_realified(const Eigen::MatrixBase<Derived>& j, Index n, Index m, Index s,
                                  Index t) {
    require_shape(j.rows() == 2 * s + t && j.cols() == 2 * n + m,
                  "realified matrix does not match the module shapes");
    return ModuleMap(j.block(0, 0, s, n), j.block(s, 0, s, n), j.block(s, 2 * n, s, m),
                     j.block(2 * s, 0, t, n), j.block(2 * s, 2 * n, t, m));
  }

  Index n() const { return c_re_.cols(); }
  Index m() const { return p_.cols(); }
  Index s() const { return c_re_.rows(); }
  Index t() const { return d_.rows(); }

  const RealMatrix& c_re() const { return c_re_; }
  const RealMatrix& c_ze() const { return c_ze_; }
  const RealMatrix& p() const { return p_; }
  const RealMatrix& d() const { return d_; }
  const RealMatrix& q() const { return q_; }
  RealMatrix& c_re() { return c_re_; }
  RealMatrix& c_ze() { return c_ze_; }
  RealMatrix& p() { return p_; }
  RealMatrix& d() { return d_; }
  RealMatrix& q() { return q_; }

  Number c(Index k, Index i) const { return {c_re_(k, i), c_ze_(k, i)}; }
  void set_c(Index k, Index i, const Number& x) {
    c_re_(k, i) = x.re;
    c_ze_(k, i) = x.ze;
  }

  Vector apply(const Vector& v) const {
    require_shape(v.n() == n() && v.m() == m(), "argument shape does not match map domain");
    return Vector(c_re_ * v.head_re(), c_re_ * v.head_ze() + c_ze_ * v.head_re() + p_ * v.tail(),
                  d_ * v.head_re() + q_ * v.tail());
  }

  Vector operator()(const Vector& v) const { return apply(v); }

  /// Image of the k-th standard basis vector.
  Vector column(Index k) const { return apply(Vector::Unit(n(), m(), k)); }

  /// (2s+t) x (2n+m) real matrix with realify(apply(v)) = realified() * realify(v).
  ///
  ///   [ C_re   0     0 ]
  ///   [ C_ze  C_re   P ]
  ///   [ D      0     Q ]
  RealMatrix realified() const {
    const Index n_ = n(), m_ = m(), s_ = s(), t_ = t();
    RealMatrix r = RealMatrix::Zero(2 * s_ + t_, 2 * n_ + m_);
    r.block(0, 0, s_, n_) = c_re_;
    r.block(s_, 0, s_, n_) = c_ze_;
    r.block(s_, n_, s_, n_) = c_re_;
    r.block(s_, 2 * n_, s_, m_) = p_;
    r.block(2 * s_, 0, t_, n_) = d_;
    r.block(2 * s_, 2 * n_, t_, m_) = q_;
    return r;
  }

  bool same_shape(const ModuleMap& o) const {
    return n() == o.n() && m() == o.m() && s() == o.s() && t() == o.t();
  }

 private:
  RealMatrix c_re_, c_ze_, p_, d_, q_;
};

using ModuleMapd = ModuleMap<double>;

template <typename Scalar>
DualVector<Scalar> apply(const ModuleMap<Scalar>& f, const DualVector<Scalar>& v) {
  return f.apply(v);
}

template <typename Scalar>
typename ModuleMap<Scalar>::RealMatrix realify_map(const ModuleMap<Scalar>& f) {
  return f.realified();
}

/// outer o inner.
template <typename Scalar>
ModuleMap<Scalar> compose(const ModuleMap<Scalar>& outer, const ModuleMap<Scalar>& inner) {
  require_shape(outer.n() == inner.s() && outer.m() == inner.t(),
                "composition of maps with mismatched inner shapes");
  // The realified product keeps the zero blocks exactly zero.
  return ModuleMap<Scalar>::from_realified(outer.realified() * inner.realified(), inner.n(),
                                           inner.m(), outer.s(), outer.t());
}

/// Largest deviation between two maps of the same shape, entrywise over blocks.
template <typename Scalar>
Scalar max_abs_diff(const ModuleMap<Scalar>& a, const ModuleMap<Scalar>& b) {
  require_shape(a.same_shape(b), "maps differ in shape");
  const auto diff = (a.realified() - b.realified()).eval();
  return diff.size() == 0 ? Scalar(0) : diff.cwiseAbs().maxCoeff();
}

/// Map from the (|S1|,|S2|)-module whose columns are the given families:
/// e_i -> S1[i], e_{k+j} -> S2[j]. S2 members must lie in Ker 1^#.
template <typename Scalar>
ModuleMap<Scalar> map_from_columns(const std::vector<DualVector<Scalar>>& s1,
                                   const std::vector<DualVector<Scalar>>& s2, Index n, Index m,
                                   double tol = default_tolerance()) {
  const auto k1 = static_cast<Index>(s1.size());
  const auto k2 = static_cast<Index>(s2.size());
  ModuleMap<Scalar> f(k1, k2, n, m);
  for (Index i = 0; i < k1; ++i) {
    const auto& v = s1[static_cast<std::size_t>(i)];
    require_shape(v.n() == n && v.m() == m, "column vector has the wrong shape");
    f.c_re().col(i) = v.head_re();
    f.c_ze().col(i) = v.head_ze();
    f.d().col(i) = v.tail();
  }
  for (Index j = 0; j < k2; ++j) {
    const auto& w = s2[static_cast<std::size_t>(j)];
    require_shape(w.n() == n && w.m() == m, "column vector has the wrong shape");
    if (!in_ker_sharp(w, tol)) throw Error(Errc::not_in_ker, "real-coefficient column outside Ker 1^#");
    f.p().col(j) = w.head_ze();
    f.q().col(j) = w.tail();
  }
  return f;
}

}  // namespace dualmod

#endif  // DUALMOD_MODULE_MAP_HPP
