#pragma once

#include "minlap/geometry.hpp"
#include "minlap/surfaces.hpp"

#include <optional>
#include <string>
#include <vector>

namespace minlap {

/// Volume of the unit ball in R^n.
double omega(int n);

/// Label of the base-point convention used by a report.
std::string base_convention(const BasePoint& base);

/// Closed chart grid (periodic coordinates sampled on [lo, hi)); disks in polar form.
std::vector<Vec> chart_grid(const ChartDomain& domain, int grid);

struct VolumeGrowthReport {
  int n = 2;
  std::string base_convention;
  int quadrature_level = 3;
  std::vector<double> radii, volumes, ratios;  // ratio = V / rⁿ
  std::vector<double> miranda_rhs;             // ((n+1)²/2) ω_{n+1} rⁿ
  std::vector<double> mu_partial;              // log V(r) / r
  bool monotone = true;                        // ratios nondecreasing within 1e-3 relative
  double C_n_estimate = 0;                     // max ratio
  double F_n_estimate = 0;                     // min ratio over the upper half of the radii
  int ends_bound = 0;
  double mu_estimate = 0;
  double brooks_bound = 0;
  bool miranda_pass = true;
  bool exceeds_omega = false;                  // sup ratio > ω_n + 1e-3
};

VolumeGrowthReport volume_growth(const Immersion& imm, const BasePoint& base, const std::vector<double>& radii,
                                 int level = 3);

struct SmallRadiusReport {
  std::vector<double> eps, values;  // V(ε) / (ω_n εⁿ)
  bool nonincreasing_toward_one = true;
};

SmallRadiusReport small_radius_limit(const Immersion& imm, const BasePoint& base, const std::vector<double>& eps,
                                     int level = 3);

struct CurvatureSampling {
  int grid = 241;                 // samples per chart direction (odd keeps the chart midline)
  std::vector<double> shells;     // r̃ shell edges for the trend and band tables
  std::vector<double> ball_radii; // radii for the ∫‖A‖² table
  int quadrature_level = 2;
};

struct CurvatureSample {
  Vec q;
  double r_tilde = 0;
  double max_kappa = 0;
  double scaled = 0;     // r̃ max|κ|
  double norm_A = 0;     // ‖A‖
  double xi = 0;         // |dr̃(ν)|
};

struct DecayBoundVerdict {
  enum class Kind { PassStrict, PassEqualityOnlyAt, Fail };
  Kind kind = Kind::PassStrict;
  double sup = 0;
  Vec sup_point;                 // chart coordinates of the largest value
  double sup_r_tilde = 0;
  std::optional<Vec> strict_witness;
  double strict_witness_value = 0;
  std::vector<Vec> equality_points;  // samples within 1e-6 of 1
  std::string label() const;
};

struct ShellRow {
  double r_lo = 0, r_hi = 0;
  int count = 0;
  double sup_scaled_A = 0;   // sup r̃ ‖A‖ in the shell
  double tail_sup_scaled_A = 0;  // sup r̃ ‖A‖ over {r̃ ≥ r_lo}
  double xi_inf = 0, xi_sup = 0;
};

struct GraphHessianVerdict {
  bool pass = true;
  double worst_ratio = 0;  // max |D²f(X,X)|² (|x|² + f²) / (1 + |Df|²)
  Vec worst_point;
};

struct CurvatureAudit {
  std::string base_convention;
  int grid = 0;
  std::vector<CurvatureSample> samples;
  DecayBoundVerdict decay_bound;
  std::vector<ShellRow> shells;
  std::optional<GraphHessianVerdict> graph_hessian_bound;
  double total_curvature = 0;  // ∫‖A‖ⁿ over the chart
  std::vector<std::pair<double, double>> A2_ratio;  // (r, ∫_{B̃_r}‖A‖² / r^{n-2})
  bool estimators_agree = true;   // shell and tail estimators share the same limit
};

CurvatureAudit curvature_audit(const Immersion& imm, const BasePoint& base, const CurvatureSampling& sampling,
                               const GraphFunctionSpec* graph = nullptr);

struct XiShell {
  double radius = 0;
  int count = 0;
  double inf = 0, sup = 0;
};

struct XiReport {
  std::vector<XiShell> shells;
  bool converged = false;
  double limit_estimate = 0;  // midpoint of the last band
};

/// |dr̃(ν)| on the spheres r̃ = R located from sign changes along the edges of
/// a samples_per_shell² chart grid.
XiReport xi_estimate(const Immersion& imm, const BasePoint& base, const std::vector<double>& shell_radii,
                     int samples_per_shell, double tol = 0.1);

double cheng_bound(double c, int n);

struct OmegaRatioRow {
  int n = 0;
  double ratio = 0;  // ω_{n+1} / ω_n
  double lower = 0;  // √(2π / (n+2))
  bool holds = false;
};
std::vector<OmegaRatioRow> omega_ratio_check(int n_max = 10);

/// Extrinsic-ball integral of ‖A‖².
double ball_A2(const Immersion& imm, const BasePoint& base, double r, int level);

}  // namespace minlap
