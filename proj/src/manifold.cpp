#include "dualmod/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace dualmod {

namespace {

DualVec normal_vector(std::mt19937_64& rng, Index n, Index m) {
  std::normal_distribution<double> normal;
  RealVector u(2 * n + m);
  for (auto& x : u) x = normal(rng);
  return unrealify(u, n, m);
}

bool try_satisfies(const ExprFunction& pred, const DualVec& x, double tol) {
  try {
    return satisfies(pred, x, tol);
  } catch (const Error&) {
    return false;
  }
}

std::optional<DualVec> try_eval(const ExprFunction& f, const DualVec& x) {
  try {
    return f.eval(x);
  } catch (const Error&) {
    return std::nullopt;
  }
}

ExprFunction concat_predicates(const ExprFunction& a, const ExprFunction& b) {
  std::vector<Expr> comps(a.components());
  comps.insert(comps.end(), b.components().begin(), b.components().end());
  return ExprFunction(a.n(), a.m(), static_cast<Index>(comps.size()), 0, std::move(comps));
}

}  // namespace

bool AtlasReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

AtlasReport verify_atlas(const Atlas& atlas, const AtlasCheckOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  AtlasReport report;
  const std::size_t k = atlas.charts.size();
  const std::size_t max_attempts = opt.samples * opt.max_attempts_factor;
  const auto same_point = atlas.same_point
                              ? atlas.same_point
                              : [](const DualVec& a, const DualVec& b, double tol) {
                                  return approx_equal(a, b, tol * (1.0 + max_abs_entry(a)));
                                };
  // Ambient points that lie in chart a.
  auto draw_in_chart = [&](std::size_t a) -> std::optional<DualVec> {
    const Chart& ch = atlas.charts[a];
    for (std::size_t attempt = 0; attempt < opt.max_attempts_factor; ++attempt) {
      DualVec p = atlas.sample_point ? atlas.sample_point(rng)
                                     : try_eval(ch.inverse, normal_vector(rng, atlas.n, atlas.m))
                                           .value_or(DualVec(atlas.ambient_n, atlas.ambient_m));
      if (try_satisfies(ch.domain, p, default_tolerance())) return p;
    }
    return std::nullopt;
  };

  // (i) coverage.
  {
    AxiomCheck c;
    c.axiom = "i";
    for (std::size_t s = 0; s < opt.samples; ++s) {
      DualVec p = atlas.sample_point
                      ? atlas.sample_point(rng)
                      : try_eval(atlas.charts[s % k].inverse, normal_vector(rng, atlas.n, atlas.m))
                            .value_or(DualVec(atlas.ambient_n, atlas.ambient_m));
      ++c.samples;
      const bool covered = std::any_of(atlas.charts.begin(), atlas.charts.end(), [&](const Chart& ch) {
        return try_satisfies(ch.domain, p, default_tolerance());
      });
      if (!covered) {
        c.passed = false;
        c.worst += 1;
        if (!c.witness) c.witness = p;
      }
    }
    c.detail = "sampled points outside every chart domain: " + std::to_string(static_cast<int>(c.worst));
    report.checks.push_back(std::move(c));
  }

  for (std::size_t a = 0; a < k; ++a) {
    const Chart& ch = atlas.charts[a];
    const Index dim = 2 * atlas.n + atlas.m;

    // (ii) every sampled image point has a ball of radius tol in the image.
    AxiomCheck open;
    open.axiom = "ii";
    open.chart_pair = {ch.label};
    // (iii) forward has a left inverse up to the point identification.
    AxiomCheck inj;
    inj.axiom = "iii";
    inj.chart_pair = {ch.label};
    std::optional<std::pair<DualVec, DualVec>> previous;

    for (std::size_t s = 0; s < opt.samples; ++s) {
      auto p = draw_in_chart(a);
      if (!p) break;
      const auto image = try_eval(ch.forward, *p);
      if (!image) {
        open.passed = inj.passed = false;
        open.witness = inj.witness = *p;
        open.detail = inj.detail = "chart map failed inside its own domain";
        break;
      }
      ++open.samples;
      ++inj.samples;

      for (Index probe = 0; probe < std::max<Index>(2 * dim, 1); ++probe) {
        DualVec delta = normal_vector(rng, atlas.n, atlas.m);
        const double len = vector_norm(delta);
        if (len == 0.0) continue;
        const DualVec target = *image + Dual(opt.tol / len) * delta;
        const auto back = try_eval(ch.inverse, target);
        double err = INFINITY;
        if (back && try_satisfies(ch.domain, *back, default_tolerance())) {
          if (const auto again = try_eval(ch.forward, *back)) {
            err = vector_norm(DualVec(*again - target)) / (1.0 + vector_norm(target));
          }
        }
        open.worst = std::max(open.worst, err);
        if (!(err <= 1e-9) && open.passed) {
          open.passed = false;
          open.witness = *p;
        }
      }

      const auto back = try_eval(ch.inverse, *image);
      const bool round_trip = back && same_point(*p, *back, 1e-8);
      if (!round_trip && inj.passed) {
        inj.passed = false;
        inj.witness = *p;
        inj.detail = "inverse(forward(p)) is a different point";
      }
      if (previous) {
        const double gap = vector_norm(DualVec(*image - previous->second));
        if (gap <= 1e-12 * (1.0 + vector_norm(*image)) && !same_point(*p, previous->first, 1e-8)) {
          inj.passed = false;
          inj.witness = *p;
          inj.detail = "two distinct points share an image";
        }
      }
      previous = std::make_pair(*p, *image);
    }
    if (open.samples == 0) open.detail = "no points sampled in chart domain";
    report.checks.push_back(std::move(open));
    report.checks.push_back(std::move(inj));
  }

  // (iv) transition maps pass the dual Cauchy-Riemann check.
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const Chart& ca = atlas.charts[a];
      const Chart& cb = atlas.charts[b];
      Transition tr;
      if (atlas.transition) {
        tr = atlas.transition(a, b);
      } else {
        tr.map = compose(cb.forward, ca.inverse);
        tr.domain = concat_predicates(compose(ca.domain, ca.inverse), compose(cb.domain, ca.inverse));
      }
      AxiomCheck c;
      c.axiom = "iv";
      c.chart_pair = {ca.label, cb.label};
      std::size_t attempts = 0;
      while (c.samples < opt.samples && attempts < max_attempts) {
        ++attempts;
        const DualVec u = normal_vector(rng, atlas.n, atlas.m);
        if (!try_satisfies(tr.domain, u, std::max(default_tolerance(), opt.domain_margin))) continue;
        CrReport cr;
        try {
          cr = cr_check(tr.map, u, opt.tol, opt.fd_step);
        } catch (const Error&) {
          continue;  // finite-difference probe left the overlap
        }
        ++c.samples;
        c.worst = std::max(c.worst, cr.residuals.max());
        if (!cr.passed && c.passed) {
          c.passed = false;
          c.witness = u;
          c.detail = "dual Cauchy-Riemann residual above tolerance";
        }
      }
      if (c.samples == 0) c.detail = "empty overlap in sampling";
      report.checks.push_back(std::move(c));
    }
  }
  return report;
}

ProjectiveSpace::ProjectiveSpace(Index n, Index m) : n_(n), m_(m) {
  require_shape(n >= 0 && m >= 0, "negative projective dimensions");
}

void ProjectiveSpace::check_ambient(const DualVec& x) const {
  require_shape(x.n() == n_ + 1 && x.m() == m_ + 1,
                "representative must live in the (n+1, m+1)-module");
}

void ProjectiveSpace::check_chart_index(Index i, Index j) const {
  if (i < 0 || i > n_ || j < 0 || j > m_) {
    throw std::out_of_range("chart index out of range");
  }
}

void ProjectiveSpace::require_valid(const DualVec& x) const {
  if (!is_valid_rep(x)) {
    throw Error(Errc::invalid_representative, "point lies in V or W");
  }
}

bool ProjectiveSpace::is_valid_rep(const DualVec& x, double tol) const {
  check_ambient(x);
  return x.head_re().cwiseAbs().maxCoeff() > tol && x.tail().cwiseAbs().maxCoeff() > tol;
}

bool ProjectiveSpace::equivalent(const DualVec& x, const DualVec& y, double tol) const {
  require_valid(x);
  require_valid(y);
  Index i = 0, j = 0;
  x.head_re().cwiseAbs().maxCoeff(&i);
  x.tail().cwiseAbs().maxCoeff(&j);
  const Dual s = mul(y.head(i), inv(x.head(i)));
  const double t = y.tail(j) / x.tail(j);
  if (!is_invertible(s) || std::abs(t) <= default_tolerance()) return false;
  const double scale = 1.0 + std::max(max_abs_entry(x), max_abs_entry(y));
  const DualVec head_diff = DualVec(y.head_re(), y.head_ze(), RealVector::Zero(m_ + 1)) -
                            s * DualVec(x.head_re(), x.head_ze(), RealVector::Zero(m_ + 1));
  const double tail_diff = (y.tail() - t * x.tail()).cwiseAbs().maxCoeff();
  return max_abs_entry(head_diff) <= tol * scale && tail_diff <= tol * scale;
}

DualVec ProjectiveSpace::canonical_rep(const DualVec& x) const {
  require_valid(x);
  Index i = 0, j = 0;
  for (Index k = 1; k <= n_; ++k) {
    if (std::abs(x.head_re()[k]) > std::abs(x.head_re()[i])) i = k;
  }
  for (Index k = 1; k <= m_; ++k) {
    if (std::abs(x.tail()[k]) > std::abs(x.tail()[j])) j = k;
  }
  const Dual s = inv(x.head(i));
  DualVec out(n_ + 1, m_ + 1);
  for (Index k = 0; k <= n_; ++k) out.set_head(k, mul(s, x.head(k)));
  out.set_head(i, Dual(1.0));
  out.tail() = x.tail() / x.tail(j);
  out.tail(j) = 1.0;
  return out;
}

bool ProjectiveSpace::in_chart(Index i, Index j, const DualVec& x, double tol) const {
  check_ambient(x);
  check_chart_index(i, j);
  return std::abs(x.head_re()[i]) > tol && std::abs(x.tail(j)) > tol;
}

DualVec ProjectiveSpace::chart_map(Index i, Index j, const DualVec& x) const {
  if (!in_chart(i, j, x)) {
    throw Error(Errc::not_in_chart, "point is outside U_" + std::to_string(i) + std::to_string(j));
  }
  const Dual s = inv(x.head(i));
  DualVec u(n_, m_);
  for (Index k = 0, out = 0; k <= n_; ++k) {
    if (k != i) u.set_head(out++, mul(x.head(k), s));
  }
  for (Index l = 0, out = 0; l <= m_; ++l) {
    if (l != j) u.tail(out++) = x.tail(l) / x.tail(j);
  }
  return u;
}

DualVec ProjectiveSpace::chart_inverse(Index i, Index j, const DualVec& u) const {
  check_chart_index(i, j);
  require_shape(u.n() == n_ && u.m() == m_, "chart coordinates must live in the (n,m)-module");
  DualVec x(n_ + 1, m_ + 1);
  for (Index k = 0, in = 0; k <= n_; ++k) x.set_head(k, k == i ? Dual(1.0) : u.head(in++));
  for (Index l = 0, in = 0; l <= m_; ++l) x.tail(l) = l == j ? 1.0 : u.tail(in++);
  return x;
}

namespace {

bool is_const_one(const Expr& e) { return e.op() == Op::constant && e.value() == Dual(1.0); }

Expr ratio(const Expr& num, const Expr& den) { return is_const_one(den) ? num : num * inv(den); }

}  // namespace

Transition ProjectiveSpace::transition(Index i, Index j, Index k, Index l) const {
  check_chart_index(i, j);
  check_chart_index(k, l);
  // Ambient coordinates of chart_inverse(i, j, u): dual head entries and real
  // tail coefficients (read as (t, 0)).
  std::vector<Expr> head, coef;
  for (Index p = 0; p <= n_; ++p) {
    head.push_back(p == i ? Expr::constant(Dual(1.0)) : Expr::coord(Part::head, p < i ? p : p - 1));
  }
  for (Index q = 0; q <= m_; ++q) {
    coef.push_back(q == j ? Expr::constant(Dual(1.0))
                          : Expr::coord(Part::tail, q < j ? q : q - 1, Component::ze));
  }
  std::vector<Expr> comps;
  for (Index p = 0; p <= n_; ++p) {
    if (p != k) comps.push_back(ratio(head[static_cast<std::size_t>(p)], head[static_cast<std::size_t>(k)]));
  }
  for (Index q = 0; q <= m_; ++q) {
    if (q != l) comps.push_back(sharp(ratio(coef[static_cast<std::size_t>(q)], coef[static_cast<std::size_t>(l)])));
  }
  Transition tr;
  tr.map = ExprFunction(n_, m_, n_, m_, std::move(comps));
  tr.domain = ExprFunction(n_, m_, 2, 0,
                           {head[static_cast<std::size_t>(k)], coef[static_cast<std::size_t>(l)]});
  return tr;
}

Chart ProjectiveSpace::chart(Index i, Index j) const {
  check_chart_index(i, j);
  Chart ch;
  ch.label = {i, j};
  const Expr xi = Expr::coord(Part::head, i);
  const Expr tj = Expr::coord(Part::tail, j, Component::ze);
  std::vector<Expr> fwd;
  for (Index p = 0; p <= n_; ++p) {
    if (p != i) fwd.push_back(Expr::coord(Part::head, p) * inv(xi));
  }
  for (Index q = 0; q <= m_; ++q) {
    if (q != j) fwd.push_back(sharp(Expr::coord(Part::tail, q, Component::ze) * inv(tj)));
  }
  ch.forward = ExprFunction(n_ + 1, m_ + 1, n_, m_, std::move(fwd));

  std::vector<Expr> back;
  for (Index p = 0; p <= n_; ++p) {
    back.push_back(p == i ? Expr::constant(Dual(1.0)) : Expr::coord(Part::head, p < i ? p : p - 1));
  }
  for (Index q = 0; q <= m_; ++q) {
    back.push_back(q == j ? Expr::constant(Dual::sharp()) : Expr::coord(Part::tail, q < j ? q : q - 1));
  }
  ch.inverse = ExprFunction(n_, m_, n_ + 1, m_ + 1, std::move(back));
  ch.domain = ExprFunction(n_ + 1, m_ + 1, 2, 0, {xi, tj});
  return ch;
}

Atlas ProjectiveSpace::atlas() const {
  Atlas a;
  a.n = n_;
  a.m = m_;
  a.ambient_n = n_ + 1;
  a.ambient_m = m_ + 1;
  for (Index i = 0; i <= n_; ++i) {
    for (Index j = 0; j <= m_; ++j) a.charts.push_back(chart(i, j));
  }
  const ProjectiveSpace space = *this;
  a.same_point = [space](const DualVec& x, const DualVec& y, double tol) {
    return space.is_valid_rep(x) && space.is_valid_rep(y) && space.equivalent(x, y, tol);
  };
  a.sample_point = [space](std::mt19937_64& rng) { return space.random_rep(rng); };
  const std::vector<Chart> charts = a.charts;
  a.transition = [space, charts](std::size_t from, std::size_t to) {
    const auto& s = charts[from].label;
    const auto& d = charts[to].label;
    return space.transition(s[0], s[1], d[0], d[1]);
  };
  return a;
}

DualVec ProjectiveSpace::random_rep(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    DualVec x = normal_vector(rng, n_ + 1, m_ + 1);
    // Exercise classes with pure zero-divisor head slots and zero tail slots.
    for (Index k = 0; k <= n_; ++k) {
      if (coin(rng) < 0.2) x.head_re()[k] = 0.0;
    }
    for (Index l = 0; l <= m_; ++l) {
      if (coin(rng) < 0.2) x.tail(l) = 0.0;
    }
    if (x.head_re().cwiseAbs().maxCoeff() > 1e-3 && x.tail().cwiseAbs().maxCoeff() > 1e-3) return x;
  }
}

ProjectivePoint::ProjectivePoint(const ProjectiveSpace& space, DualVec rep) : rep_(std::move(rep)) {
  if (!space.is_valid_rep(rep_)) {
    throw Error(Errc::invalid_representative, "point lies in V or W");
  }
}

}  // namespace dualmod
