#include "dualmod/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dualmod {

GramForm::GramForm(Index big_n, Index big_m, RealMatrix g_re, RealMatrix g_ze)
    : n_(big_n), m_(big_m), g_re_(std::move(g_re)), g_ze_(std::move(g_ze)) {
  const Index k = big_n + big_m;
  require_shape(big_n >= 0 && big_m >= 0, "negative module shape");
  require_shape(g_re_.rows() == k && g_re_.cols() == k && g_ze_.rows() == k && g_ze_.cols() == k,
                "Gram matrix must be (N+M) x (N+M)");
}

namespace {

// Coefficients of v on the standard basis as a dual vector (re, ze) of length
// N+M; tail coefficients are real.
std::pair<RealVector, RealVector> coefficients(const DualVec& v) {
  RealVector re(v.n() + v.m()), ze(v.n() + v.m());
  re << v.head_re(), v.tail();
  ze << v.head_ze(), RealVector::Zero(v.m());
  return {re, ze};
}

}  // namespace

Dual GramForm::operator()(const DualVec& v, const DualVec& w) const {
  require_shape(v.n() == n_ && v.m() == m_ && w.n() == n_ && w.m() == m_,
                "vector shape does not match the form");
  const auto [a_re, a_ze] = coefficients(v);
  const auto [b_re, b_ze] = coefficients(w);
  const RealVector g_b = g_re_ * b_re;
  const double re = a_re.dot(g_b);
  const double ze = a_ze.dot(g_b) + a_re.dot(g_ze_ * b_re) + a_re.dot(g_re_ * b_ze);
  return {re, ze};
}

Dual eval_form(const GramForm& g, const DualVec& v, const DualVec& w) { return g(v, w); }

GramForm standard_form(Index n, Index m) {
  if (n < 0 || m < 0 || n + m == 0) {
    throw Error(Errc::empty_shape, "standard form needs n, m >= 0 and n + m > 0");
  }
  const Index big_n = 2 * n, big_m = 2 * m, k = big_n + big_m;
  GramForm g(big_n, big_m, RealMatrix::Zero(k, k), RealMatrix::Zero(k, k));
  for (Index i = 0; i < n; ++i) {
    g.set_entry(2 * i, 2 * i + 1, Dual(1.0));
    g.set_entry(2 * i + 1, 2 * i, Dual(-1.0));
  }
  for (Index j = 0; j < m; ++j) {
    const Index e = big_n + 2 * j;
    g.set_entry(e, e + 1, Dual::sharp());
    g.set_entry(e + 1, e, -Dual::sharp());
  }
  return g;
}

GramForm random_form(Index n, Index m, std::uint64_t seed) {
  const GramForm base = standard_form(n, m);
  const Index big_n = base.N(), big_m = base.M(), k = big_n + big_m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_matrix = [&](Index r, Index c) {
    RealMatrix a(r, c);
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < c; ++j) a(i, j) = unit(rng);
    }
    return a;
  };
  auto well_conditioned = [&](Index size) {
    for (;;) {
      RealMatrix a = RealMatrix::Identity(size, size) + 0.5 * random_matrix(size, size);
      if (size == 0) return a;
      Eigen::JacobiSVD<RealMatrix> svd(a);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) > 0.2 * sv(0)) return a;
    }
  };
  // Automorphism: invertible C_re and Q make the realification invertible.
  const ModuleMapd t(well_conditioned(big_n), random_matrix(big_n, big_n),
                     random_matrix(big_n, big_m), random_matrix(big_m, big_n),
                     well_conditioned(big_m));
  std::vector<DualVec> cols;
  for (Index c = 0; c < k; ++c) cols.push_back(t.column(c));
  GramForm g(big_n, big_m, RealMatrix::Zero(k, k), RealMatrix::Zero(k, k));
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) g.set_entry(a, b, base(cols[a], cols[b]));
  }
  return g;
}

FormReport check_form(const GramForm& g, double tol, double sv_ratio) {
  FormReport r;
  const Index big_n = g.N(), big_m = g.M(), k = big_n + big_m;
  const double scale =
      k == 0 ? 0.0 : std::max(g.g_re().cwiseAbs().maxCoeff(), g.g_ze().cwiseAbs().maxCoeff());
  const double abs_tol = tol * std::max(1.0, scale);

  if (k > 0) {
    r.antisymmetry_residual =
        std::max((g.g_re() + g.g_re().transpose()).cwiseAbs().maxCoeff(),
                 (g.g_ze() + g.g_ze().transpose()).cwiseAbs().maxCoeff());
  }
  r.antisymmetric = r.antisymmetry_residual <= abs_tol;
  if (big_m > 0) {
    r.tail_re_residual = std::max(g.g_re().bottomRows(big_m).cwiseAbs().maxCoeff(),
                                  g.g_re().rightCols(big_m).cwiseAbs().maxCoeff());
  }
  r.tail_zero_divisor = r.tail_re_residual <= abs_tol;

  // Index of the first negligible singular value, or -1 when nondegenerate.
  auto first_null = [&](const Eigen::JacobiSVD<RealMatrix>& svd) -> Index {
    const auto& sv = svd.singularValues();
    for (Index c = 0; c < sv.size(); ++c) {
      if (!(sv(c) > sv_ratio * sv(0))) return c;
    }
    return -1;
  };

  // (iv): Re omega(v, x) = Re(v_head)^T A Re(x_head), so a left null vector
  // of A gives v outside Ker with Re omega(v, .) = 0.
  const RealMatrix a = g.g_re().topLeftCorner(big_n, big_n);
  if (big_n > 0) {
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullU);
    if (const Index c = first_null(svd); c >= 0) {
      r.nondegenerate_re = false;
      DualVec w(big_n, big_m);
      w.head_re() = svd.matrixU().col(c);
      r.witness_iv = w;
    }
  }

  // (v): for v = (1^# p | r) in Ker, omega(v, .) = 0 reads
  //   p^T A + r^T B = 0 (head columns),  r^T T = 0 (tail columns)
  // with B, T the ze parts of the tail rows. v lies outside Im iff r != 0.
  if (big_m > 0) {
    const RealMatrix b = g.g_ze().bottomLeftCorner(big_m, big_n);
    const RealMatrix t = g.g_ze().bottomRightCorner(big_m, big_m);
    std::optional<std::pair<RealVector, RealVector>> kernel_vector;
    if (r.nondegenerate_re) {
      Eigen::JacobiSVD<RealMatrix> svd(t, Eigen::ComputeFullU);
      if (const Index c = first_null(svd); c >= 0) {
        const RealVector rr = svd.matrixU().col(c);
        RealVector p = RealVector::Zero(big_n);
        if (big_n > 0) p = a.transpose().fullPivLu().solve(-b.transpose() * rr);
        kernel_vector = std::make_pair(p, rr);
      }
    } else {
      // General case: kernel of (p, r) -> (A^T p + B^T r, T^T r).
      RealMatrix kt = RealMatrix::Zero(k, k);
      kt.topLeftCorner(big_n, big_n) = a.transpose();
      kt.topRightCorner(big_n, big_m) = b.transpose();
      kt.bottomRightCorner(big_m, big_m) = t.transpose();
      Eigen::JacobiSVD<RealMatrix> svd(kt, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double cut = sv_ratio * sv(0);
      for (Index c = 0; c < k; ++c) {
        if (sv(c) > cut && sv(0) > 0) continue;
        const RealVector z = svd.matrixV().col(c);
        if (z.tail(big_m).norm() > sv_ratio) {
          kernel_vector = std::make_pair(RealVector(z.head(big_n)), RealVector(z.tail(big_m)));
          break;
        }
      }
    }
    if (kernel_vector) {
      r.nondegenerate_ze = false;
      r.witness_v = DualVec(RealVector::Zero(big_n), kernel_vector->first, kernel_vector->second);
    }
  }

  if (!r.antisymmetric) r.detail += "form is not antisymmetric; ";
  if (!r.tail_zero_divisor) r.detail += "tail rows have nonzero real parts; ";
  if (!r.nondegenerate_re) r.detail += "real head block is degenerate (axiom iv); ";
  if (!r.nondegenerate_ze) r.detail += "induced form on Ker/Im is degenerate (axiom v); ";
  return r;
}

SplitBasisd DarbouxBasis::flattened() const {
  SplitBasisd b;
  for (const auto& [e, f] : pairs_head) {
    b.s1.push_back(e);
    b.s1.push_back(f);
  }
  for (const auto& [e, f] : pairs_tail) {
    b.s2.push_back(e);
    b.s2.push_back(f);
  }
  return b;
}

DarbouxBasis darboux_basis(const GramForm& g, double tol) {
  const FormReport report = check_form(g, tol);
  if (!report.passed()) throw Error(Errc::form_invalid, report.detail);

  const Index big_n = g.N(), big_m = g.M();
  std::vector<DualVec> work;
  for (Index k = 0; k < big_n + big_m; ++k) work.push_back(DualVec::Unit(big_n, big_m, k));
  const double scale =
      std::max(g.g_re().cwiseAbs().maxCoeff(), g.g_ze().cwiseAbs().maxCoeff());
  const double threshold = tol * scale;
  DarbouxBasis basis;

  // Picks the working pair with the largest |part(omega(u, w))|.
  auto best_pair = [&](auto part) {
    std::size_t bu = 0, bw = 0;
    double best = threshold;
    bool found = false;
    for (std::size_t u = 0; u < work.size(); ++u) {
      for (std::size_t w = u + 1; w < work.size(); ++w) {
        const double v = std::abs(part(g(work[u], work[w])));
        if (v > best) {
          best = v;
          bu = u;
          bw = w;
          found = true;
        }
      }
    }
    return found ? std::optional<std::pair<std::size_t, std::size_t>>({bu, bw}) : std::nullopt;
  };
  auto take = [&](std::size_t u, std::size_t w) {
    std::pair<DualVec, DualVec> out{work[u], work[w]};
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(w));
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(u));
    return out;
  };

  // Stage 1: pairs with invertible pairing, normalised to omega(e, f) = 1.
  while (auto pick = best_pair([](const Dual& x) { return x.re; })) {
    auto [e, w] = take(pick->first, pick->second);
    const DualVec f = inv(g(e, w), 0.0) * w;
    for (auto& v : work) v = v - g(v, f) * e + g(v, e) * f;
    basis.pairs_head.emplace_back(std::move(e), f);
  }

  // Everything left pairs to zero in Re, so it lies in Ker 1^# up to rounding.
  for (auto& v : work) {
    if (v.head_re().size() > 0 &&
        v.head_re().cwiseAbs().maxCoeff() > 1e-6 * (1.0 + max_abs_entry(v))) {
      throw Error(Errc::numerical_breakdown, "reduced vector left Ker 1^#");
    }
    v.head_re().setZero();
  }

  // Stage 2: on Ker, omega = 1^# tau with tau real; pair with tau = 1.
  while (auto pick = best_pair([](const Dual& x) { return x.ze; })) {
    auto [e, w] = take(pick->first, pick->second);
    const DualVec f = Dual(1.0 / g(e, w).ze) * w;
    for (auto& v : work) v = v - Dual(g(v, f).ze) * e + Dual(g(v, e).ze) * f;
    basis.pairs_tail.emplace_back(std::move(e), f);
  }

  // Stage 3: leftovers must be in Im 1^#.
  for (const auto& v : work) {
    if (!in_im_sharp(v, 1e-6 * (1.0 + max_abs_entry(v)))) {
      throw Error(Errc::numerical_breakdown, "unpaired vector outside Im 1^#");
    }
  }
  return basis;
}

bool verify_darboux(const DarbouxBasis& basis, const GramForm& g, double tol) {
  std::vector<DualVec> es, fs;
  for (const auto& [e, f] : basis.pairs_head) {
    es.push_back(e);
    fs.push_back(f);
  }
  for (const auto& [e, f] : basis.pairs_tail) {
    es.push_back(e);
    fs.push_back(f);
  }
  for (std::size_t a = 0; a < es.size(); ++a) {
    require_shape(es[a].n() == g.N() && es[a].m() == g.M() && fs[a].n() == g.N() &&
                      fs[a].m() == g.M(),
                  "basis vector shape does not match the form");
  }
  if (g.N() != 2 * basis.n() || g.M() != 2 * basis.m()) return false;

  const auto n = static_cast<std::size_t>(basis.n());
  for (std::size_t a = 0; a < es.size(); ++a) {
    const Dual expected = a < n ? Dual(1.0) : Dual::sharp();
    if (!approx_equal(g(es[a], fs[a]), expected, tol)) return false;
    if (a >= n && !(in_ker_sharp(es[a], tol) && in_ker_sharp(fs[a], tol))) return false;
    for (std::size_t b = 0; b < es.size(); ++b) {
      if (!approx_equal(g(es[a], es[b]), Dual(), tol)) return false;
      if (!approx_equal(g(fs[a], fs[b]), Dual(), tol)) return false;
      if (a != b && !approx_equal(g(es[a], fs[b]), Dual(), tol)) return false;
    }
  }
  const SplitBasisd flat = basis.flattened();
  if (!is_independent(flat, tol)) return false;
  std::vector<DualVec> all(flat.s1);
  all.insert(all.end(), flat.s2.begin(), flat.s2.end());
  return extract_basis(all).dimension() == std::make_pair(2 * basis.n(), 2 * basis.m());
}

}  // namespace dualmod
