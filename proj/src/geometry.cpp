#include "minlap/geometry.hpp"

#include "minlap/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace minlap {

ChartDomain ChartDomain::rectangle(Vec lo, Vec hi, std::vector<bool> periodic) {
  require(lo.size() == hi.size() && lo.size() > 0, ErrorCode::InvalidArgument, "rectangle bounds mismatch");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && hi[i] > lo[i], ErrorCode::InvalidArgument,
            "rectangle bounds must be finite with lo < hi");
  if (periodic.empty()) periodic.assign(static_cast<std::size_t>(lo.size()), false);
  require(periodic.size() == static_cast<std::size_t>(lo.size()), ErrorCode::InvalidArgument,
          "periodicity flags mismatch");
  ChartDomain d;
  d.kind = Kind::Rectangle;
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  d.periodic = std::move(periodic);
  return d;
}

ChartDomain ChartDomain::ball(Vec center, double radius) {
  require(std::isfinite(radius) && radius > 0, ErrorCode::InvalidArgument, "ball radius must be positive");
  ChartDomain d;
  d.kind = Kind::Ball;
  d.center = std::move(center);
  d.radius = radius;
  return d;
}

int ChartDomain::dim() const {
  return static_cast<int>(kind == Kind::Rectangle ? lo.size() : center.size());
}

bool ChartDomain::contains(const Vec& q, double slack) const {
  if (kind == Kind::Ball) return (q - center).norm() <= radius * (1 + slack);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (periodic[static_cast<std::size_t>(i)]) continue;
    const double pad = slack * (hi[i] - lo[i]);
    if (q[i] < lo[i] - pad || q[i] > hi[i] + pad) return false;
  }
  return true;
}

Jet finite_difference_jet(const std::function<Vec(const Vec&)>& map, const Vec& q) {
  const int n = static_cast<int>(q.size());
  const double h = 1e-5 * (1.0 + q.norm());
  Jet jet;
  jet.point = map(q);
  const int m = static_cast<int>(jet.point.size());
  jet.first.resize(m, n);
  jet.second.resize(m, n * n);
  std::vector<Vec> plus(n), minus(n);
  for (int i = 0; i < n; ++i) {
    Vec qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    plus[i] = map(qp);
    minus[i] = map(qm);
    jet.first.col(i) = (plus[i] - minus[i]) / (2 * h);
    jet.second.col(i * n + i) = (plus[i] - 2 * jet.point + minus[i]) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec q_pp = q, q_pm = q, q_mp = q, q_mm = q;
      q_pp[i] += h, q_pp[j] += h;
      q_pm[i] += h, q_pm[j] -= h;
      q_mp[i] -= h, q_mp[j] += h;
      q_mm[i] -= h, q_mm[j] -= h;
      const Vec mixed = (map(q_pp) - map(q_pm) - map(q_mp) + map(q_mm)) / (4 * h * h);
      jet.second.col(i * n + j) = mixed;
      jet.second.col(j * n + i) = mixed;
    }
  }
  return jet;
}

Immersion Immersion::from_point_map(int dim, ChartDomain domain, std::function<Vec(const Vec&)> map) {
  Immersion imm;
  imm.dim = dim;
  imm.domain = std::move(domain);
  imm.analytic = false;
  imm.jet_fn = [map = std::move(map)](const Vec& q) { return finite_difference_jet(map, q); };
  return imm;
}

Immersion scaled(const Immersion& imm, double c) {
  require(std::isfinite(c) && c > 0, ErrorCode::InvalidArgument, "scale factor must be positive");
  Immersion out = imm;
  out.jet_fn = [inner = imm.jet_fn, c](const Vec& q) {
    Jet j = inner(q);
    j.point *= c;
    j.first *= c;
    j.second *= c;
    return j;
  };
  return out;
}

DerivativeCheck check_derivatives(const Immersion& imm, const std::vector<Vec>& samples) {
  DerivativeCheck out;
  const auto map = [&imm](const Vec& q) { return imm.point(q); };
  for (const Vec& q : samples) {
    const Jet a = imm.jet(q);
    const Jet fd = finite_difference_jet(map, q);
    const double s1 = std::max(a.first.norm(), 1e-300);
    const double s2 = std::max(a.second.norm(), 1.0);
    out.first_rel_error = std::max(out.first_rel_error, (a.first - fd.first).norm() / s1);
    out.second_rel_error = std::max(out.second_rel_error, (a.second - fd.second).norm() / s2);
  }
  return out;
}

BasePoint BasePoint::ambient_point(Vec a) {
  BasePoint b;
  b.ambient = std::move(a);
  return b;
}

BasePoint BasePoint::surface_point(const Immersion& imm, const Vec& q) {
  require(imm.domain.contains(q), ErrorCode::InvalidArgument, "surface base lies outside the chart");
  BasePoint b;
  b.ambient = imm.point(q);
  b.on_surface = q;
  return b;
}

namespace {

Vec unit_normal(const Mat& first) {
  const int n = static_cast<int>(first.cols());
  Vec nu(n + 1);
  if (n == 2) {
    const Eigen::Vector3d a = first.col(0), b = first.col(1);
    nu = a.cross(b);
  } else {
    Eigen::HouseholderQR<Mat> qr(first);
    nu = qr.householderQ() * Vec::Unit(n + 1, n);
    Mat aug(n + 1, n + 1);
    aug << first, nu;
    if (aug.determinant() < 0) nu = -nu;
  }
  return nu.normalized();
}

}  // namespace

PointFrame point_frame(const Jet& jet) {
  const int n = jet.dim();
  PointFrame f;
  f.metric = jet.first.transpose() * jet.first;
  Eigen::SelfAdjointEigenSolver<Mat> metric_eig(f.metric, Eigen::EigenvaluesOnly);
  const double smax = std::sqrt(std::max(metric_eig.eigenvalues().maxCoeff(), 0.0));
  const double smin = std::sqrt(std::max(metric_eig.eigenvalues().minCoeff(), 0.0));
  if (!(smin > 1e-10 * smax)) fail(ErrorCode::RankDeficient, "chart Jacobian is numerically singular");
  f.normal = unit_normal(jet.first);
  f.shape.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.shape(i, j) = jet.second.col(i * n + j).dot(f.normal);
  f.shape = 0.5 * (f.shape + f.shape.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> pencil(f.shape, f.metric, Eigen::EigenvaluesOnly);
  f.principal_curvatures = pencil.eigenvalues();
  f.mean_curvature = f.metric.ldlt().solve(f.shape).trace() / n;
  return f;
}

PointFrame point_frame(const Immersion& imm, const Vec& q) { return point_frame(imm.jet(q)); }

Mat hessian_h_chart(const Jet& jet, const PointFrame& frame, const Vec& base) {
  const double support = (jet.point - base).dot(frame.normal);
  return frame.metric + frame.shape * support;
}

ExtrinsicCalc extrinsic_calculus(const Jet& jet, const PointFrame& frame, const Vec& base) {
  const int n = jet.dim();
  const Vec diff = jet.point - base;
  const double r = diff.norm();
  if (r < 1e-12) fail(ErrorCode::BaseCoincides, "evaluation point coincides with the base point");
  ExtrinsicCalc c;
  c.r_tilde = r;
  c.grad_h = jet.first.transpose() * diff;
  c.grad_r = c.grad_h / r;
  const auto metric_ldlt = frame.metric.ldlt();
  const double tangential_sq = c.grad_h.dot(metric_ldlt.solve(c.grad_h));
  c.grad_norm = std::min(1.0, std::sqrt(std::max(tangential_sq, 0.0)) / r);
  c.normal_component = diff.dot(frame.normal) / r;
  const double trace_shape = n * frame.mean_curvature;
  c.laplacian_r = n / r - tangential_sq / (r * r * r) + trace_shape * c.normal_component;
  const Mat chart_hess = hessian_h_chart(jet, frame, base);
  const Eigen::LLT<Mat> chol(frame.metric);
  const Mat L = chol.matrixL();
  const Mat left = L.triangularView<Eigen::Lower>().solve(chart_hess);
  c.hess_h = L.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
  c.hess_h = 0.5 * (c.hess_h + c.hess_h.transpose()).eval();
  return c;
}

ExtrinsicCalc extrinsic_calculus(const Immersion& imm, const BasePoint& base, const Vec& q) {
  const Jet jet = imm.jet(q);
  return extrinsic_calculus(jet, point_frame(jet), base.ambient);
}

double hessian_h_quadratic(const Immersion& imm, const BasePoint& base, const Vec& q, const Vec& X) {
  const Jet jet = imm.jet(q);
  const PointFrame frame = point_frame(jet);
  return X.dot(hessian_h_chart(jet, frame, base.ambient) * X);
}

AmbientField AmbientField::constant(double c, int ambient_dim) {
  AmbientField f;
  f.value = [c](const Vec&) { return c; };
  f.gradient = [ambient_dim](const Vec&) { return Vec::Zero(ambient_dim); };
  f.hessian = [ambient_dim](const Vec&) { return Mat::Zero(ambient_dim, ambient_dim); };
  return f;
}

AmbientField AmbientField::coordinate(int index, int ambient_dim) {
  require(index >= 0 && index < ambient_dim, ErrorCode::InvalidArgument, "coordinate index out of range");
  AmbientField f;
  f.value = [index](const Vec& x) { return x[index]; };
  f.gradient = [index, ambient_dim](const Vec&) { return Vec::Unit(ambient_dim, index); };
  f.hessian = [ambient_dim](const Vec&) { return Mat::Zero(ambient_dim, ambient_dim); };
  return f;
}

AmbientField AmbientField::gaussian(Vec center, double width) {
  require(width > 0, ErrorCode::InvalidArgument, "gaussian width must be positive");
  const double w2 = width * width;
  AmbientField f;
  f.value = [center, w2](const Vec& x) { return std::exp(-(x - center).squaredNorm() / w2); };
  f.gradient = [center, w2](const Vec& x) {
    const Vec d = x - center;
    return Vec(-2.0 / w2 * std::exp(-d.squaredNorm() / w2) * d);
  };
  f.hessian = [center, w2](const Vec& x) {
    const Vec d = x - center;
    const double e = std::exp(-d.squaredNorm() / w2);
    const auto m = d.size();
    return Mat(e * (4.0 / (w2 * w2) * d * d.transpose() - 2.0 / w2 * Mat::Identity(m, m)));
  };
  return f;
}

SurfaceFieldSample restrict_field(const AmbientField& field, const Jet& jet, const PointFrame& frame) {
  const int n = jet.dim();
  SurfaceFieldSample s;
  s.value = field.value(jet.point);
  const Vec grad = field.gradient(jet.point);
  s.chart_gradient = jet.first.transpose() * grad;
  const auto metric_ldlt = frame.metric.ldlt();
  s.grad_norm_sq = s.chart_gradient.dot(metric_ldlt.solve(s.chart_gradient));
  const Mat pulled = jet.first.transpose() * field.hessian(jet.point) * jet.first;
  s.laplacian = metric_ldlt.solve(pulled).trace() + grad.dot(frame.normal) * n * frame.mean_curvature;
  return s;
}

}  // namespace minlap
