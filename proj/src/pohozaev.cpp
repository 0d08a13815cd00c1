#include "minlap/pohozaev.hpp"

#include "minlap/diagnostics.hpp"
#include "minlap/error.hpp"
#include "minlap/meshing.hpp"
#include "minlap/parallel.hpp"
#include "minlap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minlap {

std::string IdentityDomain::describe() const {
  if (kind == Kind::Chart) return "chart";
  char buf[64];
  std::snprintf(buf, sizeof buf, "extrinsic_ball(r=%.17g)", radius);
  return buf;
}

namespace {

/// Pointwise ingredients of the identity in the chart basis.
struct Local {
  double u = 0, grad2 = 0, lap_u = 0, lap_h = 0, hess_uu = 0, gh_gu = 0;
  Vec du, dh;
};

Local local(const Jet& jet, const AmbientField& field, const Vec& base) {
  const PointFrame frame = point_frame(jet);
  const SurfaceFieldSample s = restrict_field(field, jet, frame);
  const auto ldlt = frame.metric.ldlt();
  const Mat H = hessian_h_chart(jet, frame, base);
  Local l;
  l.u = s.value;
  l.du = s.chart_gradient;
  l.grad2 = s.grad_norm_sq;
  l.lap_u = s.laplacian;
  l.dh = jet.first.transpose() * (jet.point - base);
  l.lap_h = ldlt.solve(H).trace();
  const Vec grad_u = ldlt.solve(l.du);
  l.hess_uu = grad_u.dot(H * grad_u);
  l.gh_gu = l.dh.dot(grad_u);
  return l;
}

quadrature::Region region_of(const IdentityDomain& domain, const BasePoint& base) {
  if (domain.kind == IdentityDomain::Kind::Chart) return quadrature::Region::whole();
  require(domain.radius > 0, ErrorCode::InvalidArgument, "ball radius must be positive");
  return quadrature::Region::ball(base.ambient, domain.radius);
}

}  // namespace

IdentityReport identity_residual(const Immersion& imm, const IdentityDomain& domain, const AmbientField& u,
                                 const BasePoint& base, double lambda, int level, int max_depth) {
  quadrature::Options opt = quadrature_options(level);
  if (max_depth >= 0) opt.max_depth = max_depth;
  const Vec a = base.ambient;
  const auto res = quadrature::integrate(
      imm, region_of(domain, base), 3,
      [&](const Vec&, const Jet& jet, double* v) {
        const Local l = local(jet, u, a);
        v[0] = (l.grad2 - lambda * l.u * l.u) * l.lap_h;
        v[1] = -2 * l.hess_uu;
        v[2] = -2 * (l.lap_u + lambda * l.u) * l.gh_gu;
      },
      2,
      [&](const Vec&, const Jet& jet, const Vec& conormal, double* v) {
        const Local l = local(jet, u, a);
        v[0] = (l.grad2 - lambda * l.u * l.u) * l.dh.dot(conormal);
        v[1] = -2 * l.gh_gu * l.du.dot(conormal);
      },
      opt);
  if (domain.kind == IdentityDomain::Kind::Ball && res.min_phi_on_chart_edge < 0)
    fail(ErrorCode::TruncationTooSmall, "identity domain leaves the chart");
  IdentityReport rep;
  for (int k = 0; k < 3; ++k) rep.lhs_terms[static_cast<std::size_t>(k)] = res.domain[static_cast<std::size_t>(k)];
  for (int k = 0; k < 2; ++k) rep.rhs_terms[static_cast<std::size_t>(k)] = res.boundary[static_cast<std::size_t>(k)];
  rep.lhs = rep.lhs_terms[0] + rep.lhs_terms[1] + rep.lhs_terms[2];
  rep.rhs = rep.rhs_terms[0] + rep.rhs_terms[1];
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.domain = domain.describe();
  rep.lambda = lambda;
  rep.quadrature_level = level;
  rep.max_depth = opt.max_depth;
  return rep;
}

IdentityConvergence identity_convergence(const Immersion& imm, const IdentityDomain& domain, const AmbientField& u,
                                         const BasePoint& base, double lambda, const std::vector<int>& levels) {
  require(levels.size() >= 2, ErrorCode::InvalidArgument, "convergence study needs two levels");
  IdentityConvergence c;
  for (int level : levels) c.reports.push_back(identity_residual(imm, domain, u, base, lambda, level));
  c.min_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < c.reports.size(); ++i) {
    const double prev = c.reports[i - 1].residual, cur = c.reports[i].residual;
    const double steps = levels[i] - levels[i - 1];
    const double order = std::log2(prev / std::max(cur, 1e-300)) / steps;
    c.orders.push_back(order);
    c.min_order = std::min(c.min_order, order);
    c.decreasing = c.decreasing && cur < prev;
  }
  return c;
}

SparseSequence sparse_sequence(const std::vector<double>& t, const std::vector<double>& phi) {
  require(t.size() == phi.size() && t.size() >= 2, ErrorCode::InvalidArgument, "need matching samples");
  require(t.front() > 0, ErrorCode::InvalidArgument, "samples must start at a positive t");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(phi[i] >= 0 && std::isfinite(phi[i]), ErrorCode::InvalidArgument, "phi must be finite and nonnegative");
    if (i > 0) require(t[i] > t[i - 1], ErrorCode::InvalidArgument, "t must be ascending");
  }
  SparseSequence s;
  const double t0 = t.front();
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double piece = 0.5 * (phi[i] + phi[i - 1]) * (t[i] - t[i - 1]);
    s.integral += piece;
    const auto window = static_cast<std::size_t>(std::floor(std::log10(0.5 * (t[i] + t[i - 1]) / t0)));
    if (s.decade_integrals.size() <= window) s.decade_integrals.resize(window + 1, 0.0);
    s.decade_integrals[window] += piece;
  }
  // Keep only complete decades.
  const auto complete = static_cast<std::size_t>(std::floor(std::log10(t.back() / t0) + 1e-12));
  s.decade_integrals.resize(std::min(s.decade_integrals.size(), complete));
  if (s.decade_integrals.size() >= 2) {
    const double last = s.decade_integrals.back(), before = s.decade_integrals[s.decade_integrals.size() - 2];
    if (last > 0 && last >= 0.5 * before)
      fail(ErrorCode::NotIntegrable, "phi does not decay faster than 1/t over the last decade");
  }
  double threshold = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double v = t[i] * phi[i];
    if (v > threshold) continue;
    s.t.push_back(t[i]);
    s.t_phi.push_back(v);
    threshold = v / 2;
  }
  s.found = s.t.size() >= 2;
  return s;
}

AbsenceAudit absence_audit(const Immersion& imm, const BasePoint& base, const AmbientField& u, double lambda,
                           const std::vector<double>& radii, int grid, int level) {
  require(!radii.empty(), ErrorCode::InvalidArgument, "absence audit needs radii");
  AbsenceAudit audit;
  audit.base_convention = base_convention(base);
  audit.grid = grid;
  const Vec a = base.ambient;
  const int n = imm.dim;

  const std::vector<Vec> pts = chart_grid(imm.domain, grid);
  std::vector<double> mins(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Jet jet = imm.jet(pts[i]);
    const PointFrame frame = point_frame(jet);
    const Mat H = hessian_h_chart(jet, frame, a);
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(H, frame.metric, Eigen::EigenvaluesOnly);
    mins[i] = es.eigenvalues()[0];
  });
  const auto lo = std::min_element(mins.begin(), mins.end());
  const auto hi = std::max_element(mins.begin(), mins.end());
  audit.min_hessian_eigenvalue = *lo;
  audit.min_point = pts[static_cast<std::size_t>(lo - mins.begin())];
  audit.witness_value = *hi;
  audit.witness_point = pts[static_cast<std::size_t>(hi - mins.begin())];
  audit.strict_witness = *hi > 1e-6;

  std::vector<double> phi;
  audit.integral_bounded_away = true;
  for (double r : radii) {
    const auto res = quadrature::integrate(
        imm, quadrature::Region::ball(a, r), 2,
        [&](const Vec&, const Jet& jet, double* v) {
          const Local l = local(jet, u, a);
          v[0] = l.hess_uu;
          v[1] = l.grad2;
        },
        4,
        [&](const Vec&, const Jet& jet, const Vec& conormal, double* v) {
          const Local l = local(jet, u, a);
          const double du_n = l.du.dot(conormal);
          v[0] = n / 4.0 * 2 * l.u * du_n;
          v[1] = -0.5 * (l.grad2 - lambda * l.u * l.u) * l.dh.dot(conormal);
          v[2] = l.gh_gu * du_n;
          v[3] = l.grad2 + l.u * l.u;
        },
        quadrature_options(level));
    if (res.min_phi_on_chart_edge < 0) fail(ErrorCode::TruncationTooSmall, "audit ball leaves the chart");
    AbsenceRow row;
    row.r = r;
    row.hessian_integral = res.domain[0];
    row.dirichlet_energy = res.domain[1];
    for (std::size_t k = 0; k < 3; ++k) row.boundary_terms[k] = res.boundary[k];
    row.boundary_sum = row.boundary_terms[0] + row.boundary_terms[1] + row.boundary_terms[2];
    row.boundary_energy = res.boundary[3];
    audit.integral_bounded_away = audit.integral_bounded_away && row.hessian_integral >= 1e-8;
    phi.push_back(std::max(0.0, row.boundary_energy));
    audit.rows.push_back(row);
  }
  if (radii.size() >= 2) {
    try {
      audit.sparse = sparse_sequence(radii, phi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotIntegrable) throw;
      audit.sparse_integrable = false;
    }
  }
  const bool convex = audit.min_hessian_eigenvalue >= -1e-9 && audit.strict_witness;
  audit.verdict = convex ? "consistent_no_eigenfunction" : "hypothesis_fails";
  return audit;
}

}  // namespace minlap
