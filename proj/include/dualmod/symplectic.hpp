#ifndef DUALMOD_SYMPLECTIC_HPP
#define DUALMOD_SYMPLECTIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dualmod/elimination.hpp"

namespace dualmod {

/// Bilinear form on the (N,M)-module given by its Gram matrix on the standard
/// basis, G(k,l) = omega(b_k, b_l). Rows and columns k >= N belong to the tail
/// basis vectors; those entries are pure zero divisors for a symplectic form.
class GramForm {
 public:
  GramForm() = default;
  GramForm(Index big_n, Index big_m, RealMatrix g_re, RealMatrix g_ze);

  Index N() const { return n_; }
  Index M() const { return m_; }
  const RealMatrix& g_re() const { return g_re_; }
  const RealMatrix& g_ze() const { return g_ze_; }
  Dual entry(Index k, Index l) const { return {g_re_(k, l), g_ze_(k, l)}; }
  void set_entry(Index k, Index l, const Dual& x) {
    g_re_(k, l) = x.re;
    g_ze_(k, l) = x.ze;
  }

  /// omega(v, w) = sum_{k,l} v^k w^l G(k,l), where tail coefficients enter
  /// as real numbers.
  Dual operator()(const DualVec& v, const DualVec& w) const;

 private:
  Index n_ = 0, m_ = 0;
  RealMatrix g_re_, g_ze_;
};

Dual eval_form(const GramForm& g, const DualVec& v, const DualVec& w);

/// Canonical form on the (2n, 2m)-module with basis ordered
/// (e_1, f_1, ..., e_n, f_n | e_{n+1}, f_{n+1}, ..., e_{n+m}, f_{n+m}):
/// omega(e_i, f_i) = 1, omega(e_{n+j}, f_{n+j}) = 1^#, all other pairings of
/// basis vectors zero.
GramForm standard_form(Index n, Index m);

/// standard_form(n, m) pulled back along a random module automorphism.
GramForm random_form(Index n, Index m, std::uint64_t seed);

struct FormReport {
  bool bilinear = true;       ///< (i), (ii): hold by construction from a Gram matrix
  bool antisymmetric = true;  ///< (iii), including a zero diagonal
  bool tail_zero_divisor = true;
  bool nondegenerate_re = true;  ///< (iv)
  bool nondegenerate_ze = true;  ///< (v)
  double antisymmetry_residual = 0;
  double tail_re_residual = 0;
  std::optional<DualVec> witness_iv;
  std::optional<DualVec> witness_v;
  std::string detail;

  bool passed() const {
    return bilinear && antisymmetric && tail_zero_divisor && nondegenerate_re && nondegenerate_ze;
  }
};

/// Checks the symplectic form axioms. Structural checks use tol; nondegeneracy
/// requires the smallest singular value of the relevant real block to exceed
/// sv_ratio times the largest.
FormReport check_form(const GramForm& g, double tol = default_tolerance(), double sv_ratio = 1e-8);

struct DarbouxBasis {
  std::vector<std::pair<DualVec, DualVec>> pairs_head;
  std::vector<std::pair<DualVec, DualVec>> pairs_tail;

  Index n() const { return static_cast<Index>(pairs_head.size()); }
  Index m() const { return static_cast<Index>(pairs_tail.size()); }
  /// (e_1, f_1, ... || e_{n+1}, f_{n+1}, ...).
  SplitBasisd flattened() const;
};

/// Canonical basis by symplectic reduction. Throws FormInvalid when
/// check_form fails and NumericalBreakdown when a vector outside Im 1^# is
/// left without a partner.
DarbouxBasis darboux_basis(const GramForm& g, double tol = default_tolerance());

bool verify_darboux(const DarbouxBasis& basis, const GramForm& g, double tol = 1e-9);

}  // namespace dualmod

#endif  // DUALMOD_SYMPLECTIC_HPP
