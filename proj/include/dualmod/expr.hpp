#ifndef DUALMOD_EXPR_HPP
#define DUALMOD_EXPR_HPP

#include <memory>
#include <vector>

#include "dualmod/module_map.hpp"

namespace dualmod {

enum class Op { constant, coord, add, sub, mul, neg, inv, sharp, re_part, ze_part };

enum class Part { head, tail };

/// Which reading of a coordinate a coord node returns.
///
/// For a head slot, `full` is the dual coordinate x^i, `re` and `ze` its real
/// and zero-divisor parts embedded as real dual numbers. For a tail slot the
/// coordinate is the element t 1^#, so `full` is (0, t), `ze` is the real
/// coefficient (t, 0) and `re` is always 0.
enum class Component { full, re, ze };

const char* op_name(Op op);

/// Value of a node together with its derivative along one real direction.
struct Jet {
  Dual value;
  Dual tangent;
};

/// Immutable expression tree over the coordinates of an (n,m)-module.
/// Subtrees are shared; copying an Expr is cheap.
class Expr {
 public:
  Expr() = default;

  static Expr constant(const Dual& c);
  static Expr coord(Part part, Index slot, Component component = Component::full);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr inv(const Expr& a);
  friend Expr sharp(const Expr& a);
  friend Expr re_part(const Expr& a);
  friend Expr ze_part(const Expr& a);

  bool valid() const { return node_ != nullptr; }
  Op op() const;
  const std::vector<Expr>& args() const;
  const Dual& value() const;
  Part part() const;
  Index slot() const;
  Component component() const;

  /// Evaluates at x with dual_core arithmetic. Throws NotInvertible from inv
  /// nodes and ShapeMismatch for coordinates outside x.
  Dual eval(const DualVec& x) const;

  /// Forward-mode evaluation: value at x and derivative along the real
  /// direction dx (given in the same split coordinates as x).
  Jet eval_jet(const DualVec& x, const DualVec& dx) const;

  /// True when the tree has no re_part/ze_part nodes.
  bool free_of_part_nodes() const;

  int depth() const;
  std::size_t size() const;

  /// Replaces every coord node by the matching component of `inner`
  /// (head slot k -> inner[k], tail slot j -> inner[s + j]).
  Expr substitute(const std::vector<Expr>& head, const std::vector<Expr>& tail) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, std::vector<Expr> args);

  std::shared_ptr<const Node> node_;
};

/// Function from the (n,m)-module to the (s,t)-module given by s head
/// component expressions followed by t tail component expressions.
///
/// A tail component's value must be an element of R 1^# (its real part
/// vanishes); the stored tail coefficient is its zero-divisor part. Wrapping a
/// tail component in sharp() always satisfies this.
class ExprFunction {
 public:
  ExprFunction() = default;
  ExprFunction(Index n, Index m, Index s, Index t, std::vector<Expr> components);

  Index n() const { return n_; }
  Index m() const { return m_; }
  Index s() const { return s_; }
  Index t() const { return t_; }
  const std::vector<Expr>& components() const { return components_; }

  DualVec eval(const DualVec& x, double tol = default_tolerance()) const;
  DualVec operator()(const DualVec& x) const { return eval(x); }

  /// Value and directional derivative, both as vectors of the codomain.
  std::pair<DualVec, DualVec> eval_jet(const DualVec& x, const DualVec& dx) const;

  bool free_of_part_nodes() const;

  static ExprFunction identity(Index n, Index m);
  /// The linear function v -> f(v).
  static ExprFunction from_module_map(const ModuleMapd& f);

 private:
  Index n_ = 0, m_ = 0, s_ = 0, t_ = 0;
  std::vector<Expr> components_;
};

/// outer o inner as a new expression function.
ExprFunction compose(const ExprFunction& outer, const ExprFunction& inner);

/// Domain predicate: x belongs to the domain iff every component of `pred`
/// evaluates to an invertible dual number. An empty predicate accepts all x.
bool satisfies(const ExprFunction& pred, const DualVec& x, double tol = default_tolerance());

}  // namespace dualmod

#endif  // DUALMOD_EXPR_HPP
