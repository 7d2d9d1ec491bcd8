#ifndef DUALMOD_DUAL_VECTOR_HPP
#define DUALMOD_DUAL_VECTOR_HPP

#include <Eigen/Dense>
#include <string>

#include "dualmod/dual_number.hpp"

namespace dualmod {

using Index = Eigen::Index;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline void require_shape(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::shape_mismatch, what);
}

/// Element of the (n,m)-module: n dual head coordinates on e_1..e_n and m real
/// tail coefficients x^{n+j}, standing for x^{n+j} 1^# on e_{n+j}. The 1^# of
/// the tail is implicit, so tail slots lie in Ker 1^# by construction.
///
/// Storage is split into three real vectors (head real parts, head zero-divisor
/// parts, tail coefficients), which is also the coordinate order of the
/// realification.
template <typename Scalar>
class DualVector {
 public:
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Number = DualNumber<Scalar>;

  DualVector() = default;
  DualVector(Index n, Index m)
      : head_re_(RealVector::Zero(n)), head_ze_(RealVector::Zero(n)), tail_(RealVector::Zero(m)) {}
  DualVector(RealVector head_re, RealVector head_ze, RealVector tail)
      : head_re_(std::move(head_re)), head_ze_(std::move(head_ze)), tail_(std::move(tail)) {
    require_shape(head_re_.size() == head_ze_.size(), "head parts differ in length");
  }

  static DualVector Zero(Index n, Index m) { return DualVector(n, m); }

  /// Standard basis vector: k < n gives e_{k+1}, k >= n gives the tail vector
  /// e_{k+1} = 1^# in tail slot k - n.
  static DualVector Unit(Index n, Index m, Index k) {
    require_shape(k >= 0 && k < n + m, "basis index out of range");
    DualVector v(n, m);
    if (k < n) {
      v.head_re_[k] = Scalar(1);
    } else {
      v.tail_[k - n] = Scalar(1);
    }
    return v;
  }

  Index n() const { return head_re_.size(); }
  Index m() const { return tail_.size(); }
  Index real_dim() const { return 2 * n() + m(); }

  Number head(Index i) const { return {head_re_[i], head_ze_[i]}; }
  void set_head(Index i, const Number& x) {
    head_re_[i] = x.re;
    head_ze_[i] = x.ze;
  }
  Scalar tail(Index j) const { return tail_[j]; }
  Scalar& tail(Index j) { return tail_[j]; }

  const RealVector& head_re() const { return head_re_; }
  const RealVector& head_ze() const { return head_ze_; }
  const RealVector& tail() const { return tail_; }
  RealVector& head_re() { return head_re_; }
  RealVector& head_ze() { return head_ze_; }
  RealVector& tail() { return tail_; }

  bool same_shape(const DualVector& o) const { return n() == o.n() && m() == o.m(); }

  DualVector& operator+=(const DualVector& o) {
    require_shape(same_shape(o), "vector shapes differ");
    head_re_ += o.head_re_;
    head_ze_ += o.head_ze_;
    tail_ += o.tail_;
    return *this;
  }
  DualVector& operator-=(const DualVector& o) {
    require_shape(same_shape(o), "vector shapes differ");
    head_re_ -= o.head_re_;
    head_ze_ -= o.head_ze_;
    tail_ -= o.tail_;
    return *this;
  }

  friend DualVector operator+(DualVector a, const DualVector& b) { return a += b; }
  friend DualVector operator-(DualVector a, const DualVector& b) { return a -= b; }
  friend DualVector operator-(const DualVector& a) {
    return DualVector(-a.head_re_, -a.head_ze_, -a.tail_);
  }

  /// a * (x | t) = (a x | Re(a) t), since a (t 1^#) = Re(a) t 1^#.
  friend DualVector operator*(const Number& a, const DualVector& v) {
    return DualVector(a.re * v.head_re_, a.re * v.head_ze_ + a.ze * v.head_re_, a.re * v.tail_);
  }

  friend bool operator==(const DualVector& a, const DualVector& b) {
    return a.same_shape(b) && a.head_re_ == b.head_re_ && a.head_ze_ == b.head_ze_ &&
           a.tail_ == b.tail_;
  }

 private:
  RealVector head_re_;
  RealVector head_ze_;
  RealVector tail_;
};

using DualVec = DualVector<double>;

template <typename Scalar>
DualVector<Scalar> scalar_mul(const DualNumber<Scalar>& a, const DualVector<Scalar>& v) {
  return a * v;
}

/// <x, y> = 2 sum x^{i1} y^{i1} + sum x^{i2} y^{i2} + sum x^{n+j} y^{n+j}.
template <typename Scalar>
Scalar inner(const DualVector<Scalar>& x, const DualVector<Scalar>& y) {
  require_shape(x.same_shape(y), "inner product of vectors with different (n,m)");
  return Scalar(2) * x.head_re().dot(y.head_re()) + x.head_ze().dot(y.head_ze()) +
         x.tail().dot(y.tail());
}

template <typename Scalar>
Scalar vector_norm(const DualVector<Scalar>& x) {
  using std::sqrt;
  return sqrt(inner(x, x));
}

/// Multiplication by 1^#: head (p, q) -> (0, p), tail -> 0.
template <typename Scalar>
DualVector<Scalar> sharp_action(const DualVector<Scalar>& v) {
  using RV = typename DualVector<Scalar>::RealVector;
  return DualVector<Scalar>(RV::Zero(v.n()), v.head_re(), RV::Zero(v.m()));
}

template <typename Scalar>
bool in_ker_sharp(const DualVector<Scalar>& v, double tol = default_tolerance()) {
  return v.n() == 0 || v.head_re().template lpNorm<Eigen::Infinity>() <= tol;
}

template <typename Scalar>
bool in_im_sharp(const DualVector<Scalar>& v, double tol = default_tolerance()) {
  return in_ker_sharp(v, tol) && (v.m() == 0 || v.tail().template lpNorm<Eigen::Infinity>() <= tol);
}

/// Coordinates (head re parts, head ze parts, tail), length 2n+m.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> realify(const DualVector<Scalar>& v) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.real_dim());
  out << v.head_re(), v.head_ze(), v.tail();
  return out;
}

template <typename Derived>
DualVector<typename Derived::Scalar> unrealify(const Eigen::MatrixBase<Derived>& x, Index n,
                                               Index m) {
  require_shape(x.size() == 2 * n + m, "realified length does not match (n,m)");
  return DualVector<typename Derived::Scalar>(x.segment(0, n), x.segment(n, n),
                                              x.segment(2 * n, m));
}

template <typename Scalar>
Scalar max_abs_entry(const DualVector<Scalar>& v) {
  return v.real_dim() == 0 ? Scalar(0) : realify(v).template lpNorm<Eigen::Infinity>();
}

template <typename Scalar>
bool approx_equal(const DualVector<Scalar>& a, const DualVector<Scalar>& b, double tol) {
  return a.same_shape(b) && (a.real_dim() == 0 || max_abs_entry(DualVector<Scalar>(a - b)) <= tol);
}

}  // namespace dualmod

#endif  // DUALMOD_DUAL_VECTOR_HPP
