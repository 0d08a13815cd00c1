#pragma once

#include "minlap/geometry.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace minlap::quadrature {

/// Cell-based integration over two-dimensional charts. Disk charts of higher
/// dimension are swept by rays instead and support domain integrals only.
///
/// The chart (a rectangle, or a disk handled in polar parameters) is covered
/// by a base grid of 8·2^level cells per direction. Cells that the region
/// boundary may cross are subdivided up to `max_depth` times; at the deepest
/// level the level function is linearly interpolated on two triangles per cell
/// and clipped exactly, so the integrated domain is a polygon in parameter
/// space whose boundary polyline carries the boundary integrals. Before the
/// main pass the grid is re-fitted to the parameter window that the region
/// occupies, which keeps small regions resolved.
struct Options {
  int level = 3;
  int max_depth = 6;
  int gauss_points = 4;
};

/// Region {q : phi(F(q)) ≤ 0}; `lipschitz` bounds |∇phi| on ambient space.
/// The optional gradient and local Hessian bound sharpen the cell
/// classification when the parametrization is strongly anisotropic.
struct Region {
  std::function<double(const Vec&)> phi;
  double lipschitz = 1.0;
  std::function<Vec(const Vec&)> gradient;
  std::function<double(const Vec&)> curvature;

  static Region whole();
  static Region ball(Vec center, double radius);
};

/// out[k] receives the k-th integrand value at q; the engine applies the
/// quadrature weight and the area (or arc-length) element.
using DomainIntegrand = std::function<void(const Vec& q, const Jet& jet, double* out)>;
/// `conormal` is the outward unit conormal of the boundary, in chart components.
using BoundaryIntegrand = std::function<void(const Vec& q, const Jet& jet, const Vec& conormal, double* out)>;

struct Result {
  std::vector<double> domain;
  std::vector<double> boundary;
  /// Smallest level-function value seen on a non-periodic chart edge; negative
  /// means the region leaves the chart.
  double min_phi_on_chart_edge = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

Result integrate(const Immersion& imm, const Region& region, std::size_t domain_values,
                 const DomainIntegrand& domain_integrand, std::size_t boundary_values,
                 const BoundaryIntegrand& boundary_integrand, const Options& options = {});

/// Area of the region.
double area(const Immersion& imm, const Region& region, const Options& options = {});

/// Gauss–Legendre nodes and weights on [-1, 1] (1 to 5 points).
void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace minlap::quadrature
