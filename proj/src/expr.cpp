#include "dualmod/expr.hpp"

#include <algorithm>
#include <cassert>

namespace dualmod {

struct Expr::Node {
  Op op = Op::constant;
  std::vector<Expr> args;
  Dual value;
  Part part = Part::head;
  Index slot = 0;
  Component component = Component::full;
};

const char* op_name(Op op) {
  switch (op) {
    case Op::constant: return "const";
    case Op::coord: return "coord";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::neg: return "neg";
    case Op::inv: return "inv";
    case Op::sharp: return "sharp";
    case Op::re_part: return "re_part";
    case Op::ze_part: return "ze_part";
  }
  return "?";
}

Expr Expr::make(Op op, std::vector<Expr> args) {
  for (const auto& a : args) {
    if (!a.valid()) throw std::invalid_argument("expression node with empty argument");
  }
  auto node = std::make_shared<Node>();
  node->op = op;
  node->args = std::move(args);
  return Expr(std::move(node));
}

Expr Expr::constant(const Dual& c) {
  auto node = std::make_shared<Node>();
  node->op = Op::constant;
  node->value = c;
  return Expr(std::move(node));
}

Expr Expr::coord(Part part, Index slot, Component component) {
  if (slot < 0) throw std::invalid_argument("negative coordinate slot");
  auto node = std::make_shared<Node>();
  node->op = Op::coord;
  node->part = part;
  node->slot = slot;
  node->component = component;
  return Expr(std::move(node));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Op::add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Op::sub, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Op::mul, {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(Op::neg, {a}); }
Expr inv(const Expr& a) { return Expr::make(Op::inv, {a}); }
Expr sharp(const Expr& a) { return Expr::make(Op::sharp, {a}); }
Expr re_part(const Expr& a) { return Expr::make(Op::re_part, {a}); }
Expr ze_part(const Expr& a) { return Expr::make(Op::ze_part, {a}); }

Op Expr::op() const { return node_->op; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
const Dual& Expr::value() const { return node_->value; }
Part Expr::part() const { return node_->part; }
Index Expr::slot() const { return node_->slot; }
Component Expr::component() const { return node_->component; }

namespace {

Jet read_coord(Part part, Index slot, Component component, const DualVec& x, const DualVec* dx) {
  Jet out;
  if (part == Part::head) {
    require_shape(slot < x.n(), "head coordinate slot out of range");
    const Dual v = x.head(slot);
    const Dual d = dx ? dx->head(slot) : Dual();
    switch (component) {
      case Component::full: out = {v, d}; break;
      case Component::re: out = {Dual(v.re), Dual(d.re)}; break;
      case Component::ze: out = {Dual(v.ze), Dual(d.ze)}; break;
    }
  } else {
    require_shape(slot < x.m(), "tail coordinate slot out of range");
    const double v = x.tail(slot);
    const double d = dx ? dx->tail(slot) : 0.0;
    switch (component) {
      case Component::full: out = {Dual(0.0, v), Dual(0.0, d)}; break;
      case Component::re: out = {Dual(), Dual()}; break;
      case Component::ze: out = {Dual(v), Dual(d)}; break;
    }
  }
  return out;
}

}  // namespace

Dual Expr::eval(const DualVec& x) const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::constant: return nd.value;
    case Op::coord: return read_coord(nd.part, nd.slot, nd.component, x, nullptr).value;
    case Op::add: return nd.args[0].eval(x) + nd.args[1].eval(x);
    case Op::sub: return nd.args[0].eval(x) - nd.args[1].eval(x);
    case Op::mul: return mul(nd.args[0].eval(x), nd.args[1].eval(x));
    case Op::neg: return -nd.args[0].eval(x);
    case Op::inv: return dualmod::inv(nd.args[0].eval(x));
    case Op::sharp: return mul(Dual::sharp(), nd.args[0].eval(x));
    case Op::re_part: return Dual(nd.args[0].eval(x).re);
    case Op::ze_part: return Dual(nd.args[0].eval(x).ze);
  }
  return {};
}

Jet Expr::eval_jet(const DualVec& x, const DualVec& dx) const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::constant: return {nd.value, Dual()};
    case Op::coord: return read_coord(nd.part, nd.slot, nd.component, x, &dx);
    case Op::add: {
      const Jet a = nd.args[0].eval_jet(x, dx), b = nd.args[1].eval_jet(x, dx);
      return {a.value + b.value, a.tangent + b.tangent};
    }
    case Op::sub: {
      const Jet a = nd.args[0].eval_jet(x, dx), b = nd.args[1].eval_jet(x, dx);
      return {a.value - b.value, a.tangent - b.tangent};
    }
    case Op::mul: {
      const Jet a = nd.args[0].eval_jet(x, dx), b = nd.args[1].eval_jet(x, dx);
      return {mul(a.value, b.value), mul(a.tangent, b.value) + mul(a.value, b.tangent)};
    }
    case Op::neg: {
      const Jet a = nd.args[0].eval_jet(x, dx);
      return {-a.value, -a.tangent};
    }
    case Op::inv: {
      const Jet a = nd.args[0].eval_jet(x, dx);
      const Dual r = dualmod::inv(a.value);
      return {r, -mul(mul(r, r), a.tangent)};
    }
    case Op::sharp: {
      const Jet a = nd.args[0].eval_jet(x, dx);
      return {mul(Dual::sharp(), a.value), mul(Dual::sharp(), a.tangent)};
    }
    case Op::re_part: {
      const Jet a = nd.args[0].eval_jet(x, dx);
      return {Dual(a.value.re), Dual(a.tangent.re)};
    }
    case Op::ze_part: {
      const Jet a = nd.args[0].eval_jet(x, dx);
      return {Dual(a.value.ze), Dual(a.tangent.ze)};
    }
  }
  return {};
}

bool Expr::free_of_part_nodes() const {
  if (op() == Op::re_part || op() == Op::ze_part) return false;
  return std::all_of(args().begin(), args().end(),
                     [](const Expr& a) { return a.free_of_part_nodes(); });
}

int Expr::depth() const {
  int d = 0;
  for (const auto& a : args()) d = std::max(d, a.depth());
  return d + 1;
}

std::size_t Expr::size() const {
  std::size_t k = 1;
  for (const auto& a : args()) k += a.size();
  return k;
}

Expr Expr::substitute(const std::vector<Expr>& head, const std::vector<Expr>& tail) const {
  const Node& nd = *node_;
  if (nd.op == Op::constant) return *this;
  if (nd.op == Op::coord) {
    const auto slot = static_cast<std::size_t>(nd.slot);
    const auto& pool = nd.part == Part::head ? head : tail;
    require_shape(slot < pool.size(), "substitution is missing a coordinate");
    const Expr& e = pool[slot];
    // A tail component already evaluates to t 1^#, which is the `full` reading.
    switch (nd.component) {
      case Component::full: return e;
      case Component::re: return re_part(e);
      case Component::ze: return ze_part(e);
    }
  }
  std::vector<Expr> args;
  args.reserve(nd.args.size());
  for (const auto& a : nd.args) args.push_back(a.substitute(head, tail));
  return make(nd.op, std::move(args));
}

ExprFunction::ExprFunction(Index n, Index m, Index s, Index t, std::vector<Expr> components)
    : n_(n), m_(m), s_(s), t_(t), components_(std::move(components)) {
  require_shape(n >= 0 && m >= 0 && s >= 0 && t >= 0, "negative module shape");
  require_shape(static_cast<Index>(components_.size()) == s + t,
                "component count does not match codomain");
  for (const auto& c : components_) {
    if (!c.valid()) throw std::invalid_argument("empty component expression");
  }
}

DualVec ExprFunction::eval(const DualVec& x, double tol) const {
  require_shape(x.n() == n_ && x.m() == m_, "argument shape does not match function domain");
  DualVec y(s_, t_);
  for (Index k = 0; k < s_; ++k) y.set_head(k, components_[static_cast<std::size_t>(k)].eval(x));
  for (Index l = 0; l < t_; ++l) {
    const Dual v = components_[static_cast<std::size_t>(s_ + l)].eval(x);
    if (std::abs(v.re) > tol * std::max(1.0, std::abs(v.ze))) {
      throw Error(Errc::evaluation_failed,
                  "tail component " + std::to_string(l) + " is not a multiple of 1^#");
    }
    y.tail(l) = v.ze;
  }
  return y;
}

std::pair<DualVec, DualVec> ExprFunction::eval_jet(const DualVec& x, const DualVec& dx) const {
  require_shape(x.n() == n_ && x.m() == m_ && dx.same_shape(x),
                "argument shape does not match function domain");
  DualVec y(s_, t_), dy(s_, t_);
  for (Index k = 0; k < s_ + t_; ++k) {
    const Jet j = components_[static_cast<std::size_t>(k)].eval_jet(x, dx);
    if (k < s_) {
      y.set_head(k, j.value);
      dy.set_head(k, j.tangent);
    } else {
      y.tail(k - s_) = j.value.ze;
      dy.tail(k - s_) = j.tangent.ze;
    }
  }
  return {y, dy};
}

bool ExprFunction::free_of_part_nodes() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Expr& e) { return e.free_of_part_nodes(); });
}

ExprFunction ExprFunction::identity(Index n, Index m) {
  std::vector<Expr> comps;
  for (Index i = 0; i < n; ++i) comps.push_back(Expr::coord(Part::head, i));
  for (Index j = 0; j < m; ++j) comps.push_back(Expr::coord(Part::tail, j));
  return ExprFunction(n, m, n, m, std::move(comps));
}

ExprFunction ExprFunction::from_module_map(const ModuleMapd& f) {
  std::vector<Expr> comps;
  auto accumulate = [](Expr acc, const Expr& term) { return acc.valid() ? acc + term : term; };
  for (Index k = 0; k < f.s(); ++k) {
    Expr acc;
    for (Index i = 0; i < f.n(); ++i) {
      acc = accumulate(acc, Expr::constant(f.c(k, i)) * Expr::coord(Part::head, i));
    }
    for (Index j = 0; j < f.m(); ++j) {
      acc = accumulate(acc, Expr::constant(Dual(f.p()(k, j))) * Expr::coord(Part::tail, j));
    }
    comps.push_back(acc.valid() ? acc : Expr::constant(Dual()));
  }
  for (Index l = 0; l < f.t(); ++l) {
    Expr acc;
    for (Index i = 0; i < f.n(); ++i) {
      acc = accumulate(acc, sharp(Expr::constant(Dual(f.d()(l, i))) * Expr::coord(Part::head, i)));
    }
    for (Index j = 0; j < f.m(); ++j) {
      acc = accumulate(acc, Expr::constant(Dual(f.q()(l, j))) * Expr::coord(Part::tail, j));
    }
    comps.push_back(acc.valid() ? acc : Expr::constant(Dual()));
  }
  return ExprFunction(f.n(), f.m(), f.s(), f.t(), std::move(comps));
}

ExprFunction compose(const ExprFunction& outer, const ExprFunction& inner) {
  require_shape(outer.n() == inner.s() && outer.m() == inner.t(),
                "composition of functions with mismatched inner shapes");
  const auto& ic = inner.components();
  const auto s = static_cast<std::ptrdiff_t>(inner.s());
  std::vector<Expr> head(ic.begin(), ic.begin() + s);
  std::vector<Expr> tail(ic.begin() + s, ic.end());
  std::vector<Expr> comps;
  for (const auto& c : outer.components()) comps.push_back(c.substitute(head, tail));
  return ExprFunction(inner.n(), inner.m(), outer.s(), outer.t(), std::move(comps));
}

bool satisfies(const ExprFunction& pred, const DualVec& x, double tol) {
  require_shape(x.n() == pred.n() && x.m() == pred.m(), "point shape does not match predicate");
  for (const auto& c : pred.components()) {
    try {
      if (!is_invertible(c.eval(x), tol)) return false;
    } catch (const Error& e) {
      if (e.code() == Errc::not_invertible) return false;
      throw;
    }
  }
  return true;
}

}  // namespace dualmod
