#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace minlap::bdgg {

/// Parameters of the Bombieri–De Giorgi–Giusti barriers over R^{2m}.
struct Params {
  int m = 4;
  int p = 3;                 // m − 1
  double delta = 0;          // 4p² − 12p + 1
  double alpha = 0;          // (2p + 1 − √δ) / 4
  double lambda_lo = 0;      // α (2p+1)/(2p+2)
  double lambda_hi = 0;      // min{α, p/α²}
  double lambda = 0;         // chosen exponent inside (lambda_lo, lambda_hi)
  double B = 10, D = 10;
  bool valid = false;
};

/// `lambda` ≤ 0 selects the midpoint of the admissible range.
Params params(int m, double lambda = 0, double B = 10, double D = 10);

/// f₁ = (u² − v²)(u² + v²)^{α−1} in the block radii u, v.
double f1_uv(double u, double v, const Params& prm);
/// f₁ at a point of R^{2m}; u and v are the norms of the two m-blocks.
double f1(const std::vector<double>& x, const Params& prm);

/// ∫_w^∞ t^{λ−2}(1 + t^{2α(λ−1)})^{−1} dt for w ≥ 0, computed by quadrature.
double inner_integral(double w, const Params& prm);
/// Closed form of inner_integral(0): (π/b) / sin(π s/b) with s = λ−1, b = 2α(λ−1).
double inner_integral_at_zero(const Params& prm);

/// P(z) = ∫₀^z exp(B · inner_integral(|w|)) dw; odd in z.
double P(double z, const Params& prm);
/// f₂ = P((u²−v²) + f₁ [1 + D |(u²−v²)/(u²+v²)|^{λ−1}]).
double f2_uv(double u, double v, const Params& prm);
double f2(const std::vector<double>& x, const Params& prm);

/// Quarter disk {u, v ≥ 0, u² + v² ≤ R²} triangulated in rings; the mesh is
/// exactly symmetric under (u, v) ↦ (v, u) and `mirror` gives that map on
/// vertices.
struct QuarterDisk {
  double R = 0;
  int rings = 0;
  std::vector<std::array<double, 2>> points;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> mirror;
  std::vector<bool> on_arc;
};

QuarterDisk quarter_disk(double R, int rings);

struct ReducedSolution {
  QuarterDisk mesh;
  std::vector<double> f;
  double residual_norm = 0;    // free part of the discrete Euler–Lagrange gradient
  double initial_residual = 0;
  int newton_iterations = 0;
  std::string boundary_data = "f1";
  double antisymmetry = 0;     // max |f(u,v) + f(v,u)|
  double diagonal_max = 0;     // max |f| on u = v
  int m = 0;
};

/// Damped Newton on the P1 discretization of the weighted area
/// ∫ (uv)^{m−1} √(1 + |∇f|²) with f = f₁ on the arc and natural conditions on
/// the axes.
ReducedSolution solve_reduced_mse(const Params& prm, double R, int rings, double tol = 1e-12, int max_iterations = 60);

/// Nodal samples of an arbitrary function on the quarter-disk mesh.
ReducedSolution sample_function(const std::function<double(double, double)>& f, double R, int rings, int m = 4);

struct BarrierRow {
  double u = 0, v = 0, f1 = 0, f = 0, f2 = 0;
};

struct BarrierReport {
  std::vector<BarrierRow> rows;
  int samples = 0;
  int lower_violations = 0;   // |f₁| > |f| + 1e-3 (+ discretization slack)
  int upper_violations = 0;   // |f| > |f₂| + 1e-3
  double worst_lower = 0;     // max(|f₁| − |f|)
  double worst_upper = 0;     // max(|f| − |f₂|)
};

/// Barrier ordering |f₁| ≤ |f| ≤ |f₂| on interior nodes (every `stride`-th).
BarrierReport barrier_ordering(const ReducedSolution& sol, const Params& prm, int stride = 1);

/// max |Df| on B_h against the argument sup_{B_{2h}} |f₂| / (2h) of the
/// interior gradient estimate; the constants of that estimate are not known,
/// so only the two numbers are reported.
struct GradientRow {
  double h = 0;
  double max_grad = 0;
  double f2_argument = 0;
};
std::vector<GradientRow> gradient_estimate(const ReducedSolution& sol, const Params& prm,
                                           const std::vector<double>& h_values);

/// dr̃(ν) of the graph over R^{2m} with base at the ambient origin, from element
/// gradients, grouped by r̃ shells.
struct ProbeShell {
  double r_lo = 0, r_hi = 0;
  int count = 0;
  double xi_min = 0, xi_max = 0;  // band of |dr̃(ν)|
};
std::vector<ProbeShell> normal_alignment_probe(const ReducedSolution& sol, const std::vector<double>& shell_edges);

}  // namespace minlap::bdgg
