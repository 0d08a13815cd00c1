#include "minlap/diagnostics.hpp"

#include "minlap/error.hpp"
#include "minlap/meshing.hpp"
#include "minlap/parallel.hpp"
#include "minlap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace minlap {

double omega(int n) {
  require(n >= 0, ErrorCode::InvalidArgument, "dimension must be nonnegative");
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

std::string base_convention(const BasePoint& base) {
  return base.on_surface ? "on_surface" : "ambient";
}

VolumeGrowthReport volume_growth(const Immersion& imm, const BasePoint& base, const std::vector<double>& radii,
                                 int level) {
  require(radii.size() >= 3, ErrorCode::InvalidArgument, "volume growth needs at least three radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    require(radii[i] > radii[i - 1] && radii[0] > 0, ErrorCode::InvalidArgument, "radii must be positive and ascending");
  const int n = imm.dim;
  VolumeGrowthReport rep;
  rep.n = n;
  rep.base_convention = base_convention(base);
  rep.quadrature_level = level;
  rep.radii = radii;
  for (double r : radii) {
    const double v = extrinsic_ball_volume(imm, base, r, level);
    rep.volumes.push_back(v);
    rep.ratios.push_back(v / std::pow(r, n));
    rep.miranda_rhs.push_back((n + 1.0) * (n + 1.0) / 2.0 * omega(n + 1) * std::pow(r, n));
    rep.mu_partial.push_back(std::log(v) / r);
  }
  const std::size_t m = radii.size();
  for (std::size_t i = 1; i < m; ++i)
    if (rep.ratios[i] < rep.ratios[i - 1] * (1 - 1e-3)) rep.monotone = false;
  rep.C_n_estimate = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  const std::size_t half = m / 2;
  rep.F_n_estimate = *std::min_element(rep.ratios.begin() + static_cast<long>(half), rep.ratios.end());
  // The ratio approaches k ω_n from below on surfaces with k planar ends, so a
  // small allowance keeps a finite sample from undercounting.
  rep.ends_bound = std::max(1, static_cast<int>(std::floor(rep.C_n_estimate / omega(n) + 0.05)));
  // Least-squares slope of log V against r over the upper half.
  double sr = 0, sl = 0, srr = 0, srl = 0;
  const double cnt = static_cast<double>(m - half);
  for (std::size_t i = half; i < m; ++i) {
    const double l = std::log(rep.volumes[i]);
    sr += radii[i];
    sl += l;
    srr += radii[i] * radii[i];
    srl += radii[i] * l;
  }
  const double denom = cnt * srr - sr * sr;
  rep.mu_estimate = denom > 0 ? std::max(0.0, (cnt * srl - sr * sl) / denom) : 0.0;
  rep.brooks_bound = rep.mu_estimate * rep.mu_estimate / 4.0;
  for (std::size_t i = 0; i < m; ++i) rep.miranda_pass = rep.miranda_pass && rep.volumes[i] <= rep.miranda_rhs[i];
  rep.exceeds_omega = rep.C_n_estimate > omega(n) + 1e-3;
  return rep;
}

SmallRadiusReport small_radius_limit(const Immersion& imm, const BasePoint& base, const std::vector<double>& eps,
                                     int level) {
  require(!eps.empty(), ErrorCode::InvalidArgument, "no radii");
  require(base.on_surface.has_value(), ErrorCode::InvalidArgument, "small-radius limit needs a base on the surface");
  SmallRadiusReport rep;
  rep.eps = eps;
  const int n = imm.dim;
  for (double e : eps) rep.values.push_back(extrinsic_ball_volume(imm, base, e, level) / (omega(n) * std::pow(e, n)));
  // Ordered by decreasing ε the values must not increase, and never drop below 1.
  std::vector<std::size_t> order(eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = rep.values[order[k]];
    if (v < 1.0 - 1e-6) rep.nonincreasing_toward_one = false;
    if (k > 0 && v > rep.values[order[k - 1]] * (1 + 1e-6)) rep.nonincreasing_toward_one = false;
  }
  return rep;
}

std::string DecayBoundVerdict::label() const {
  switch (kind) {
    case Kind::PassStrict: return "pass_strict";
    case Kind::PassEqualityOnlyAt: return "pass_equality_only_at";
    case Kind::Fail: return "fail";
  }
  return "fail";
}

std::vector<Vec> chart_grid(const ChartDomain& d, int grid) {
  std::vector<Vec> pts;
  if (d.kind == ChartDomain::Kind::Ball) {
    pts.push_back(d.center);
    const int rings = grid / 2;
    for (int i = 1; i <= rings; ++i) {
      const double rho = d.radius * i / rings;
      const int count = 4 * i;
      for (int j = 0; j < count; ++j) {
        const double phi = 2 * std::numbers::pi * j / count;
        Vec q = d.center;
        q[0] += rho * std::cos(phi);
        q[1] += rho * std::sin(phi);
        pts.push_back(q);
      }
    }
    return pts;
  }
  const int n0 = d.periodic[0] ? grid - 1 : grid, n1 = d.periodic[1] ? grid - 1 : grid;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      Vec q(2);
      q << d.lo[0] + (d.hi[0] - d.lo[0]) * i / (grid - 1), d.lo[1] + (d.hi[1] - d.lo[1]) * j / (grid - 1);
      pts.push_back(q);
    }
  return pts;
}

namespace {

double norm_A(const PointFrame& f) { return f.principal_curvatures.norm(); }

}  // namespace

double ball_A2(const Immersion& imm, const BasePoint& base, double r, int level) {
  const auto res = quadrature::integrate(
      imm, quadrature::Region::ball(base.ambient, r), 1,
      [](const Vec&, const Jet& jet, double* out) {
        const double a = norm_A(point_frame(jet));
        out[0] = a * a;
      },
      0, {}, quadrature_options(level));
  if (res.min_phi_on_chart_edge < 0) fail(ErrorCode::TruncationTooSmall, "ball leaves the chart");
  return res.domain[0];
}

CurvatureAudit curvature_audit(const Immersion& imm, const BasePoint& base, const CurvatureSampling& sampling,
                               const GraphFunctionSpec* graph) {
  require(sampling.grid >= 3, ErrorCode::InvalidArgument, "sampling grid too small");
  CurvatureAudit audit;
  audit.base_convention = base_convention(base);
  audit.grid = sampling.grid;
  const std::vector<Vec> pts = chart_grid(imm.domain, sampling.grid);
  std::vector<std::optional<CurvatureSample>> raw(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Jet jet = imm.jet(pts[i]);
    const double r = (jet.point - base.ambient).norm();
    if (r < 1e-9) return;
    const PointFrame f = point_frame(jet);
    const ExtrinsicCalc c = extrinsic_calculus(jet, f, base.ambient);
    CurvatureSample s;
    s.q = pts[i];
    s.r_tilde = r;
    s.max_kappa = f.principal_curvatures.cwiseAbs().maxCoeff();
    s.scaled = r * s.max_kappa;
    s.norm_A = norm_A(f);
    s.xi = std::abs(c.normal_component);
    raw[i] = s;
  });
  for (auto& s : raw)
    if (s) audit.samples.push_back(std::move(*s));
  require(!audit.samples.empty(), ErrorCode::InvalidArgument, "no usable samples");

  DecayBoundVerdict& v = audit.decay_bound;
  const CurvatureSample* top = &audit.samples.front();
  const CurvatureSample* low = &audit.samples.front();
  for (const auto& s : audit.samples) {
    if (s.scaled > top->scaled) top = &s;
    if (s.scaled < low->scaled) low = &s;
    // Maxima can be quartically flat (1 - t^4/3 at a catenoid neck), so equality is judged near round-off.
    if (s.scaled >= 1 - 1e-10) v.equality_points.push_back(s.q);
  }
  v.sup = top->scaled;
  v.sup_point = top->q;
  v.sup_r_tilde = top->r_tilde;
  if (low->scaled < 1 - 1e-6) {
    v.strict_witness = low->q;
    v.strict_witness_value = low->scaled;
  }
  if (v.sup > 1 + 1e-9 || !v.strict_witness) v.kind = DecayBoundVerdict::Kind::Fail;
  else if (v.equality_points.empty()) v.kind = DecayBoundVerdict::Kind::PassStrict;
  else v.kind = DecayBoundVerdict::Kind::PassEqualityOnlyAt;

  for (std::size_t i = 0; i + 1 < sampling.shells.size(); ++i) {
    ShellRow row;
    row.r_lo = sampling.shells[i];
    row.r_hi = sampling.shells[i + 1];
    row.xi_inf = 1.0;
    for (const auto& s : audit.samples) {
      if (s.r_tilde >= row.r_lo) row.tail_sup_scaled_A = std::max(row.tail_sup_scaled_A, s.r_tilde * s.norm_A);
      if (s.r_tilde < row.r_lo || s.r_tilde >= row.r_hi) continue;
      ++row.count;
      row.sup_scaled_A = std::max(row.sup_scaled_A, s.r_tilde * s.norm_A);
      row.xi_inf = std::min(row.xi_inf, s.xi);
      row.xi_sup = std::max(row.xi_sup, s.xi);
    }
    if (row.count == 0) row.xi_inf = 0;
    audit.shells.push_back(row);
  }
  // Both estimators tend to zero together or not at all; compare their last values.
  if (!audit.shells.empty()) {
    const ShellRow& last = audit.shells.back();
    const bool shell_small = last.sup_scaled_A < 1e-2, tail_small = last.tail_sup_scaled_A < 1e-2;
    audit.estimators_agree = shell_small == tail_small;
  }

  if (graph) {
    GraphHessianVerdict g;
    const double f0 = graph->f(Vec::Zero(graph->n));
    for (const auto& s : audit.samples) {
      const Vec& x = s.q;
      const double fx = graph->f(x) - f0;
      const double denom = x.squaredNorm() + fx * fx;
      if (denom < 1e-18) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es(graph->D2f(x), Eigen::EigenvaluesOnly);
      const double h = es.eigenvalues().cwiseAbs().maxCoeff();
      const double ratio = h * h * denom / (1 + graph->Df(x).squaredNorm());
      if (ratio > g.worst_ratio || g.worst_point.size() == 0) g.worst_ratio = ratio, g.worst_point = x;
    }
    g.pass = g.worst_ratio <= 1 + 1e-9;
    audit.graph_hessian_bound = g;
  }

  const auto tc = quadrature::integrate(
      imm, quadrature::Region::whole(), 1,
      [n = imm.dim](const Vec&, const Jet& jet, double* out) { out[0] = std::pow(norm_A(point_frame(jet)), n); }, 0,
      {}, quadrature_options(sampling.quadrature_level));
  audit.total_curvature = tc.domain[0];
  for (double r : sampling.ball_radii)
    audit.A2_ratio.emplace_back(r, ball_A2(imm, base, r, sampling.quadrature_level) / std::pow(r, imm.dim - 2));
  return audit;
}

XiReport xi_estimate(const Immersion& imm, const BasePoint& base, const std::vector<double>& shell_radii,
                     int samples_per_shell, double tol) {
  require(samples_per_shell >= 4, ErrorCode::InvalidArgument, "too few samples per shell");
  require(!shell_radii.empty(), ErrorCode::InvalidArgument, "no shells");
  const ChartDomain& d = imm.domain;
  const int G = samples_per_shell;
  Vec lo(2), hi(2);
  if (d.kind == ChartDomain::Kind::Ball) {
    lo = d.center.array() - d.radius;
    hi = d.center.array() + d.radius;
  } else {
    lo = d.lo;
    hi = d.hi;
  }
  const auto node = [&](int i, int j) {
    Vec q(2);
    q << lo[0] + (hi[0] - lo[0]) * i / G, lo[1] + (hi[1] - lo[1]) * j / G;
    return q;
  };
  const auto inside = [&](const Vec& q) { return d.contains(q, 0.0); };
  // r̃ on the grid.
  std::vector<double> rt(static_cast<std::size_t>((G + 1) * (G + 1)), std::numeric_limits<double>::quiet_NaN());
  parallel_for(rt.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / (G + 1), j = static_cast<int>(idx) % (G + 1);
    const Vec q = node(i, j);
    if (inside(q)) rt[idx] = (imm.point(q) - base.ambient).norm();
  });
  XiReport rep;
  rep.shells.resize(shell_radii.size());
  parallel_for(shell_radii.size(), [&](std::size_t s) {
    const double R = shell_radii[s];
    XiShell sh;
    sh.radius = R;
    sh.inf = 1.0;
    const auto visit = [&](int i0, int j0, int i1, int j1) {
      const double a = rt[static_cast<std::size_t>(i0 * (G + 1) + j0)] - R;
      const double b = rt[static_cast<std::size_t>(i1 * (G + 1) + j1)] - R;
      if (!(std::isfinite(a) && std::isfinite(b)) || (a < 0) == (b < 0)) return;
      Vec qa = node(i0, j0), qb = node(i1, j1);
      double fa = a;
      for (int it = 0; it < 60; ++it) {
        const Vec qm = 0.5 * (qa + qb);
        const double fm = (imm.point(qm) - base.ambient).norm() - R;
        if ((fm < 0) == (fa < 0)) qa = qm, fa = fm;
        else qb = qm;
      }
      const Vec q = 0.5 * (qa + qb);
      const Jet jet = imm.jet(q);
      const double xi = std::abs(extrinsic_calculus(jet, point_frame(jet), base.ambient).normal_component);
      ++sh.count;
      sh.inf = std::min(sh.inf, xi);
      sh.sup = std::max(sh.sup, xi);
    };
    for (int i = 0; i <= G; ++i)
      for (int j = 0; j <= G; ++j) {
        if (i < G) visit(i, j, i + 1, j);
        if (j < G) visit(i, j, i, j + 1);
      }
    if (sh.count == 0) sh.inf = 0;
    rep.shells[s] = sh;
  });
  std::vector<XiShell> used;
  for (const auto& sh : rep.shells)
    if (sh.count > 0) used.push_back(sh);
  if (!used.empty()) {
    // Settled when the bands of the outer half of the shells fit in one interval of width tol.
    const std::size_t half = used.size() / 2;
    double lo_all = 1, hi_all = 0;
    for (std::size_t i = half; i < used.size(); ++i) {
      lo_all = std::min(lo_all, used[i].inf);
      hi_all = std::max(hi_all, used[i].sup);
    }
    rep.converged = hi_all - lo_all <= tol;
    rep.limit_estimate = 0.5 * (used.back().inf + used.back().sup);
  }
  return rep;
}

double cheng_bound(double c, int n) {
  if (c < 0) fail(ErrorCode::NegativeC, "the Ricci constant must be nonnegative");
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  return (n - 1.0) * (n - 1.0) * c / 4.0;
}

std::vector<OmegaRatioRow> omega_ratio_check(int n_max) {
  std::vector<OmegaRatioRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    OmegaRatioRow row;
    row.n = n;
    row.ratio = omega(n + 1) / omega(n);
    row.lower = std::sqrt(2 * std::numbers::pi / (n + 2));
    row.holds = row.ratio >= row.lower;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace minlap
