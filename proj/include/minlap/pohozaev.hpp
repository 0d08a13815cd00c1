#pragma once

#include "minlap/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace minlap {

/// Integration domain for the integral identity: the whole chart, or the
/// extrinsic ball of the given radius about the base point.
struct IdentityDomain {
  enum class Kind { Chart, Ball };
  Kind kind = Kind::Chart;
  double radius = 0;

  static IdentityDomain chart() { return {}; }
  static IdentityDomain ball(double r) { return {Kind::Ball, r}; }
  std::string describe() const;
};

/// Terms of the Rellich–Pohozaev identity for h = ½ r̃²:
///   ∫(‖∇u‖² − λu²)Δh − 2∫Hess h(∇u,∇u) − 2∫(Δu + λu) g(∇h,∇u)
///     = ∫_∂ (‖∇u‖² − λu²) ∂h/∂n − 2∫_∂ g(∇h,∇u) ∂u/∂n.
/// Each entry already carries its sign and factor.
struct IdentityReport {
  std::array<double, 3> lhs_terms{};
  std::array<double, 2> rhs_terms{};
  double lhs = 0, rhs = 0;
  double residual = 0;  // |lhs − rhs|
  std::string domain;
  double lambda = 0;
  int quadrature_level = 0;
  int max_depth = 0;
};

/// `max_depth` < 0 keeps the level's default subdivision depth.
IdentityReport identity_residual(const Immersion& imm, const IdentityDomain& domain, const AmbientField& u,
                                 const BasePoint& base, double lambda, int level = 3, int max_depth = -1);

/// Residuals over a ladder of quadrature levels with the observed order
/// log2(residual_k / residual_{k+1}) between neighbours.
struct IdentityConvergence {
  std::vector<IdentityReport> reports;
  std::vector<double> orders;
  double min_order = 0;
  bool decreasing = true;
};

IdentityConvergence identity_convergence(const Immersion& imm, const IdentityDomain& domain, const AmbientField& u,
                                         const BasePoint& base, double lambda, const std::vector<int>& levels);

/// Greedy points t_i with t_i φ(t_i) under a halving threshold, from samples
/// of φ ≥ 0 on an ascending grid.
struct SparseSequence {
  std::vector<double> t, t_phi;
  double integral = 0;                  // trapezoidal ∫φ over the samples
  std::vector<double> decade_integrals; // ∫φ over successive factor-10 windows
  bool found = false;                   // at least two points selected
};

/// Raises NotIntegrable when the integral over the last complete decade has
/// not dropped below half of the one before, the signature of φ ~ 1/t.
SparseSequence sparse_sequence(const std::vector<double>& t, const std::vector<double>& phi);

struct AbsenceRow {
  double r = 0;
  double hessian_integral = 0;   // ∫_{B̃_r} Hess h(∇u,∇u)
  double dirichlet_energy = 0;   // ∫_{B̃_r} ‖∇u‖²
  /// Boundary side, with the factors the identity forces when Δu + λu = 0 and Δh = n:
  /// (n/4)∫∂u²/∂n, −½∫(‖∇u‖² − λu²)∂h/∂n, ∫g(∇h,∇u)∂u/∂n.
  std::array<double, 3> boundary_terms{};
  double boundary_sum = 0;
  double boundary_energy = 0;    // ∫_{∂B̃_r}(‖∇u‖² + u²)
};

struct AbsenceAudit {
  std::string base_convention;
  int grid = 0;
  double min_hessian_eigenvalue = 0;
  Vec min_point;
  bool strict_witness = false;
  Vec witness_point;
  double witness_value = 0;
  std::vector<AbsenceRow> rows;
  SparseSequence sparse;
  bool sparse_integrable = true;
  bool integral_bounded_away = false;  // Hess h integral ≥ 1e-8 on every ball
  std::string verdict;                 // "consistent_no_eigenfunction" or "hypothesis_fails"
};

AbsenceAudit absence_audit(const Immersion& imm, const BasePoint& base, const AmbientField& u, double lambda,
                           const std::vector<double>& radii, int grid = 121, int level = 3);

}  // namespace minlap
