#ifndef DUALMOD_DUAL_NUMBER_HPP
#define DUALMOD_DUAL_NUMBER_HPP

#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dualmod {

inline constexpr const char* kVersion = "0.1.0";

/// Error categories raised by the library. Every failure is reported as a
/// dualmod::Error carrying one of these codes.
enum class Errc {
  not_invertible,
  shape_mismatch,
  no_solution,
  not_in_ker,
  not_in_chart,
  invalid_representative,
  evaluation_failed,
  form_invalid,
  numerical_breakdown,
  empty_shape,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::not_invertible: return "NotInvertible";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::no_solution: return "NoSolution";
    case Errc::not_in_ker: return "NotInKer";
    case Errc::not_in_chart: return "NotInChart";
    case Errc::invalid_representative: return "InvalidRepresentative";
    case Errc::evaluation_failed: return "EvaluationFailed";
    case Errc::form_invalid: return "FormInvalid";
    case Errc::numerical_breakdown: return "NumericalBreakdown";
    case Errc::empty_shape: return "EmptyShape";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

namespace detail {
inline std::atomic<double>& tolerance_slot() {
  static std::atomic<double> tol{1e-9};
  return tol;
}
}  // namespace detail

/// Library-wide absolute tolerance for invertibility and zero tests.
/// Operations that branch on invertibility take it as a defaulted parameter.
inline double default_tolerance() {
  return detail::tolerance_slot().load(std::memory_order_relaxed);
}

inline void set_default_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("tolerance must be positive and finite");
  }
  detail::tolerance_slot().store(tol, std::memory_order_relaxed);
}

/// Element re + ze * 1^# of the dual real number algebra, where (1^#)^2 = 0.
template <typename Scalar>
struct DualNumber {
  Scalar re{0};
  Scalar ze{0};

  constexpr DualNumber() = default;
  constexpr DualNumber(Scalar real) : re(real), ze(0) {}  // NOLINT: implicit embedding of R
  constexpr DualNumber(Scalar real, Scalar zero_divisor) : re(real), ze(zero_divisor) {}

  /// The nilpotent unit 1^#.
  static constexpr DualNumber sharp() { return {Scalar(0), Scalar(1)}; }

  constexpr DualNumber& operator+=(const DualNumber& o) {
    re += o.re;
    ze += o.ze;
    return *this;
  }
  constexpr DualNumber& operator-=(const DualNumber& o) {
    re -= o.re;
    ze -= o.ze;
    return *this;
  }
  constexpr DualNumber& operator*=(const DualNumber& o) {
    ze = re * o.ze + ze * o.re;
    re = re * o.re;
    return *this;
  }

  friend constexpr DualNumber operator+(DualNumber a, const DualNumber& b) { return a += b; }
  friend constexpr DualNumber operator-(DualNumber a, const DualNumber& b) { return a -= b; }
  friend constexpr DualNumber operator*(DualNumber a, const DualNumber& b) { return a *= b; }
  friend constexpr DualNumber operator-(const DualNumber& a) { return {-a.re, -a.ze}; }
  friend constexpr bool operator==(const DualNumber& a, const DualNumber& b) {
    return a.re == b.re && a.ze == b.ze;
  }

  friend std::ostream& operator<<(std::ostream& os, const DualNumber& x) {
    return os << "(" << x.re << ", " << x.ze << ")";
  }
};

using Dual = DualNumber<double>;

template <typename Scalar>
constexpr DualNumber<Scalar> mul(const DualNumber<Scalar>& x, const DualNumber<Scalar>& y) {
  return {x.re * y.re, x.re * y.ze + x.ze * y.re};
}

template <typename Scalar>
bool is_invertible(const DualNumber<Scalar>& x, double tol = default_tolerance()) {
  using std::abs;
  return abs(x.re) > tol;
}

/// Nonzero with vanishing real part.
template <typename Scalar>
bool is_zero_divisor(const DualNumber<Scalar>& x, double tol = default_tolerance()) {
  using std::abs;
  return abs(x.re) <= tol && abs(x.ze) > tol;
}

template <typename Scalar>
DualNumber<Scalar> inv(const DualNumber<Scalar>& x, double tol = default_tolerance()) {
  if (!is_invertible(x, tol)) {
    throw Error(Errc::not_invertible, "real part is within tolerance of zero");
  }
  return {Scalar(1) / x.re, -x.ze / (x.re * x.re)};
}

template <typename Scalar>
DualNumber<Scalar> operator/(const DualNumber<Scalar>& y, const DualNumber<Scalar>& x) {
  return mul(inv(x), y);
}

/// sqrt(2 re^2 + ze^2).
template <typename Scalar>
Scalar scalar_norm(const DualNumber<Scalar>& x) {
  using std::sqrt;
  return sqrt(Scalar(2) * x.re * x.re + x.ze * x.ze);
}

template <typename Scalar>
bool approx_equal(const DualNumber<Scalar>& a, const DualNumber<Scalar>& b, double tol) {
  using std::abs;
  return abs(a.re - b.re) <= tol && abs(a.ze - b.ze) <= tol;
}

}  // namespace dualmod

#endif  // DUALMOD_DUAL_NUMBER_HPP
