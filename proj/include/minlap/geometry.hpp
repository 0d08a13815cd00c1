#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace minlap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Parameter domain of a chart. Rectangles may be periodic per coordinate
/// (the angular coordinate of the catenoid and helicoid); balls are only
/// used for graph charts.
struct ChartDomain {
  enum class Kind { Rectangle, Ball };
  Kind kind = Kind::Rectangle;
  Vec lo, hi;                    // rectangle bounds
  std::vector<bool> periodic;    // rectangle periodicity per coordinate
  Vec center;                    // ball center
  double radius = 0.0;           // ball radius

  static ChartDomain rectangle(Vec lo, Vec hi, std::vector<bool> periodic = {});
  static ChartDomain ball(Vec center, double radius);

  int dim() const;
  bool contains(const Vec& q, double slack = 1e-12) const;
};

/// Value and derivatives of a chart map at one parameter point.
/// `second` stores d2F/dq_i dq_j in column i * n + j.
struct Jet {
  Vec point;   // n+1
  Mat first;   // (n+1) x n
  Mat second;  // (n+1) x (n*n)

  int dim() const { return static_cast<int>(first.cols()); }
  Vec d2(int i, int j) const { return second.col(i * dim() + j); }
};

/// A parametrized hypersurface chart F: U ⊂ R^n → R^{n+1}.
struct Immersion {
  int dim = 2;
  ChartDomain domain;
  std::function<Jet(const Vec&)> jet_fn;
  bool analytic = true;

  Jet jet(const Vec& q) const { return jet_fn(q); }
  Vec point(const Vec& q) const { return jet_fn(q).point; }

  /// Chart with derivatives from central differences of `map`, step 1e-5 (1 + |q|).
  static Immersion from_point_map(int dim, ChartDomain domain, std::function<Vec(const Vec&)> map);
};

/// The immersion q ↦ c F(q).
Immersion scaled(const Immersion& imm, double c);

/// Central-difference jet of an arbitrary chart point map.
Jet finite_difference_jet(const std::function<Vec(const Vec&)>& map, const Vec& q);

/// Largest relative deviation of the analytic first/second derivatives from
/// central differences of the point map over the given samples.
struct DerivativeCheck {
  double first_rel_error = 0.0;
  double second_rel_error = 0.0;
};
DerivativeCheck check_derivatives(const Immersion& imm, const std::vector<Vec>& samples);

/// Reference point of the extrinsic distance r̃ = |F(q) - a|.
struct BasePoint {
  Vec ambient;
  std::optional<Vec> on_surface;

  static BasePoint ambient_point(Vec a);
  /// Base F(q) for a chart point q.
  static BasePoint surface_point(const Immersion& imm, const Vec& q);
};

struct PointFrame {
  Mat metric;                 // g = dFᵀ dF
  Vec normal;                 // unit ν, det[dF | ν] > 0
  Mat shape;                  // (d2F · ν) in the chart basis
  Vec principal_curvatures;   // ascending
  double mean_curvature = 0;  // H = tr(g⁻¹ shape) / n
};

PointFrame point_frame(const Jet& jet);
PointFrame point_frame(const Immersion& imm, const Vec& q);

/// Extrinsic-distance calculus at a chart point.
struct ExtrinsicCalc {
  double r_tilde = 0;
  double grad_norm = 0;          // ‖∇r̃‖ from the tangential projection of F - a
  double normal_component = 0;   // dr̃(ν)
  double laplacian_r = 0;        // Δr̃
  Mat hess_h;                    // Hess(½ r̃²) in a g-orthonormal frame
  Vec grad_h;                    // dh in the chart basis
  Vec grad_r;                    // dr̃ in the chart basis
};

ExtrinsicCalc extrinsic_calculus(const Jet& jet, const PointFrame& frame, const Vec& base);
ExtrinsicCalc extrinsic_calculus(const Immersion& imm, const BasePoint& base, const Vec& q);

/// Hess h (X, X) for a chart-basis tangent vector X.
double hessian_h_quadratic(const Immersion& imm, const BasePoint& base, const Vec& q, const Vec& X);

/// Hess h in the chart basis: g + shape (F - a)·ν.
Mat hessian_h_chart(const Jet& jet, const PointFrame& frame, const Vec& base);

/// Scalar field on the ambient space together with its gradient and Hessian;
/// restricted to the surface it provides test functions for the integral audits.
struct AmbientField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;

  static AmbientField constant(double c, int ambient_dim);
  static AmbientField coordinate(int index, int ambient_dim);
  /// exp(-|x - center|² / width²)
  static AmbientField gaussian(Vec center, double width);
};

/// Intrinsic quantities of an ambient field restricted to the surface.
struct SurfaceFieldSample {
  double value = 0;
  Vec chart_gradient;     // du in the chart basis
  double grad_norm_sq = 0;
  double laplacian = 0;   // Laplace–Beltrami Δu
};
SurfaceFieldSample restrict_field(const AmbientField& field, const Jet& jet, const PointFrame& frame);

}  // namespace minlap
