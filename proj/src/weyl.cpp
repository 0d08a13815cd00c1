#include "minlap/weyl.hpp"

#include "minlap/diagnostics.hpp"
#include "minlap/error.hpp"
#include "minlap/meshing.hpp"
#include "minlap/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace minlap {

const WeylRow& WeylSchedule::row(int m) const {
  for (const auto& r : rows)
    if (r.m == m) return r;
  fail(ErrorCode::InvalidArgument, "schedule has no row " + std::to_string(m));
}

double WeylSchedule::mass_margin(const WeylRow& r) const {
  return F_n / C_n * std::pow(r.b / r.d, n) - std::pow(r.a / r.d, n);
}

WeylSchedule build_schedule(int n, double C_n, double F_n, double alpha, int m_max, double lambda, double d0,
                            double E) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  require(F_n > 0, ErrorCode::InvalidArgument, "F_n must be positive");
  if (C_n < F_n) fail(ErrorCode::InvalidRatio, "C_n must be at least F_n");
  require(alpha > 1, ErrorCode::InvalidArgument, "schedule exponent must exceed 1");
  require(m_max >= 1 && m_max <= 64, ErrorCode::InvalidArgument, "m_max out of range");
  require(lambda > 0, ErrorCode::InvalidArgument, "lambda must be positive");
  require(d0 > 0 && E > 0, ErrorCode::InvalidArgument, "d0 and E must be positive");
  WeylSchedule s;
  s.n = n;
  s.C_n = C_n;
  s.F_n = F_n;
  s.alpha = alpha;
  s.theta = std::pow(C_n / F_n, 1.0 / n);
  s.tau = std::pow(s.theta, -n) * (std::pow(2.0, -n) - std::pow(2.0, -alpha * n));
  s.E = E;
  s.d0 = d0;
  s.lambda = lambda;
  int k_prev = 0;
  for (int m = 1; m <= m_max; ++m) {
    WeylRow r;
    r.m = m;
    r.d = m * d0;
    r.b = r.d / 2;
    r.a = r.d / (std::pow(2.0, alpha) * s.theta);
    r.c = r.a / 2;
    const double w1 = r.a - r.c, w2 = r.d - r.b;
    r.C = E * (1 / w1 + 1 / w2 + 1 / (w1 * w1) + 1 / (w2 * w2));
    // The scales must form a decreasing sequence, so k never drops below its predecessor.
    int k = 0;
    while (std::ldexp(1.0, -k) * r.C > 1.0 / m) ++k;
    r.k = std::max(k, k_prev);
    r.eps = std::ldexp(1.0, -r.k);
    k_prev = r.k;
    s.rows.push_back(r);
  }
  return s;
}

namespace {

double smoothstep(double x) { return x * x * x * (10 + x * (-15 + 6 * x)); }
double smoothstep_d1(double x) { return 30 * x * x * (1 - x) * (1 - x); }
double smoothstep_d2(double x) { return 60 * x * (1 - x) * (1 - 2 * x); }

}  // namespace

Cutoff::Value Cutoff::operator()(double t) const {
  Value v;
  if (t <= c || t >= d) return v;
  if (t >= a && t <= b) {
    v.psi = 1;
    return v;
  }
  if (t < a) {
    const double w = a - c, x = (t - c) / w;
    v.psi = smoothstep(x);
    v.d1 = smoothstep_d1(x) / w;
    v.d2 = smoothstep_d2(x) / (w * w);
  } else {
    const double w = d - b, x = (d - t) / w;
    v.psi = smoothstep(x);
    v.d1 = -smoothstep_d1(x) / w;
    v.d2 = smoothstep_d2(x) / (w * w);
  }
  return v;
}

double Cutoff::max_d1() const { return 15.0 / 8.0 / std::min(a - c, d - b); }

double Cutoff::max_d2() const {
  const double w = std::min(a - c, d - b);
  return 10.0 / std::sqrt(3.0) / (w * w);
}

Cutoff cutoff(const WeylSchedule& schedule, int m) {
  const WeylRow& r = schedule.row(m);
  return Cutoff{r.a, r.b, r.c, r.d};
}

WeylPointwise weyl_pointwise(const Jet& jet, const PointFrame& frame, const Vec& base, const Cutoff& psi, double eps,
                             double eta, double lambda, double xi) {
  using C = std::complex<double>;
  const ExtrinsicCalc ec = extrinsic_calculus(jet, frame, base);
  const double r = ec.r_tilde;
  const auto p = psi(eps * r);
  const double sl = std::sqrt(lambda), se = std::sqrt(eta);
  const C phase = std::polar(1.0, sl * r);
  const double g2 = ec.grad_norm * ec.grad_norm;
  const double zeta2 = 1 - xi * xi;
  WeylPointwise w;
  w.u = se * p.psi * phase;
  w.t11 = eps * se * phase * C(eps * p.d2, 2 * sl * p.d1) * g2;
  w.t12 = se * phase * C(eps * p.d1, sl * p.psi) * ec.laplacian_r;
  w.t13 = lambda * (zeta2 - g2) * w.u;
  return w;
}

WeylReportRow weyl_residual(const Immersion& imm, const BasePoint& base, const WeylSchedule& schedule, int m,
                            double xi, int level) {
  require(xi >= 0 && xi <= 1, ErrorCode::InvalidArgument, "xi must lie in [0, 1]");
  const WeylRow& row = schedule.row(m);
  const Cutoff psi = cutoff(schedule, m);
  const double eps = row.eps, lambda = schedule.lambda;
  const double inner = row.c / eps, outer = row.d / eps;
  WeylReportRow out;
  out.m = m;
  out.eps = eps;
  out.C = row.C;
  out.a = row.a;
  out.b = row.b;
  out.c = row.c;
  out.d = row.d;
  out.lambda = lambda;
  out.xi = xi;
  out.zeta2 = 1 - xi * xi;
  out.certified = out.zeta2 * lambda;
  out.quadrature_level = level;

  const double annulus = extrinsic_ball_volume(imm, base, outer, level) - extrinsic_ball_volume(imm, base, inner, level);
  require(annulus > 0, ErrorCode::InvalidArgument, "empty annulus");
  out.eta = 1 / annulus;

  quadrature::Options opt = quadrature_options(level);
  opt.max_depth += 1;
  const auto res = quadrature::integrate(
      imm, quadrature::Region::ball(base.ambient, outer), 5,
      [&](const Vec&, const Jet& jet, double* v) {
        const Vec diff = jet.point - base.ambient;
        const double r = diff.norm();
        if (r <= inner) return;  // ψ(εr̃) vanishes
        const auto w = weyl_pointwise(jet, point_frame(jet), base.ambient, psi, eps, out.eta, lambda, xi);
        v[0] = std::norm(w.u);
        v[1] = std::norm(w.t11);
        v[2] = std::norm(w.t12);
        v[3] = std::norm(w.t13);
        v[4] = std::norm(w.sum());
      },
      0, {}, opt);
  if (res.min_phi_on_chart_edge < 0) fail(ErrorCode::TruncationTooSmall, "Weyl annulus leaves the chart");
  out.mass = res.domain[0];
  out.T11 = res.domain[1];
  out.T12 = res.domain[2];
  out.T13 = res.domain[3];
  out.residual_ratio = std::sqrt(res.domain[4]) / std::sqrt(out.mass);

  const double C = row.C;
  out.B14 = eps * eps * 2 * C * C * (eps * eps + 2 * lambda);
  out.B15 = eps * eps / (row.c * row.c) * 2 * (eps * eps * C * C + lambda) * schedule.n;
  // Sup of (ξ² − dr̃(ν)²)² over the annulus from spheres spread across it.
  std::vector<double> shells;
  const int count = 17;
  for (int i = 0; i < count; ++i) shells.push_back(inner + (outer - inner) * i / (count - 1));
  const XiReport xr = xi_estimate(imm, base, shells, 160);
  double worst = 0;
  for (const auto& sh : xr.shells) {
    if (sh.count == 0) continue;
    out.xi_sup = std::max(out.xi_sup, sh.sup);
    worst = std::max({worst, std::abs(xi * xi - sh.sup * sh.sup), std::abs(xi * xi - sh.inf * sh.inf)});
  }
  out.B16 = lambda * lambda * worst * worst;
  return out;
}

WeylReport weyl_run(const Immersion& imm, const BasePoint& base, const WeylSchedule& schedule, double xi, int level) {
  WeylReport rep;
  rep.schedule = schedule;
  for (const auto& r : schedule.rows) {
    rep.rows.push_back(weyl_residual(imm, base, schedule, r.m, xi, level));
    const auto& row = rep.rows.back();
    rep.mass_ok = rep.mass_ok && row.mass >= schedule.tau - 1e-2;
    rep.bounds_ok = rep.bounds_ok && row.T11 <= row.B14 * (1 + 1e-6) && row.T12 <= row.B15 * (1 + 1e-6) &&
                    row.T13 <= row.B16 * (1 + 1e-6) + 1e-12;
    if (rep.rows.size() > 1)
      rep.ratio_decreasing = rep.ratio_decreasing && row.residual_ratio <= rep.rows[rep.rows.size() - 2].residual_ratio;
  }
  return rep;
}

}  // namespace minlap
