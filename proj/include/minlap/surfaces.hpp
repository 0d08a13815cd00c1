#pragma once

#include "minlap/geometry.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace minlap {

/// f: R^n → R with first and second derivatives, defining the graph q ↦ (q, f(q)).
struct GraphFunctionSpec {
  int n = 2;
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> Df;
  std::function<Mat(const Vec&)> D2f;
  std::string label;
  bool minimal = false;  // known to solve the minimal surface equation
  double max_chart_radius = std::numeric_limits<double>::infinity();

  // Catalog-compatible description (used for config round trips).
  std::string family;
  std::vector<double> coefficients;
  double offset = 0.0;

  static GraphFunctionSpec zero(int n);
  /// f(q) = coefficients · q + offset
  static GraphFunctionSpec linear(std::vector<double> coefficients, double offset = 0.0);
  /// f(q) = q₁² / 2
  static GraphFunctionSpec paraboloid(int n = 2);
  /// f(q) = q₁²
  static GraphFunctionSpec square(int n = 2);
  /// f(q) = q₁³
  static GraphFunctionSpec cubic(int n = 2);
  /// Scherk's surface f(x, y) = log(cos y / cos x) on |x|, |y| < π/2.
  static GraphFunctionSpec scherk();
  static GraphFunctionSpec from_family(const std::string& family, int n, std::vector<double> coefficients,
                                       double offset);
};

/// Parameter-domain bounds. `radius` is the chart-disk radius for planes and
/// graphs and the |s| bound of the helicoid; `t_max` bounds the catenoid
/// height parameter and the helicoid angle.
struct Truncation {
  std::optional<double> radius;
  std::optional<double> t_max;
};

struct SurfaceSpec {
  enum class Kind { Plane, Graph, Catenoid, Helicoid };
  Kind kind = Kind::Plane;
  int n = 2;
  std::optional<GraphFunctionSpec> graph;
  double neck_radius = 1.0;
  double pitch = 1.0;
  Truncation truncation;

  static SurfaceSpec plane(int n, double radius);
  static SurfaceSpec graph_of(GraphFunctionSpec g, double radius);
  static SurfaceSpec catenoid(double neck_radius, double t_max);
  static SurfaceSpec helicoid(double pitch, double s_max, double theta_max);

  bool minimal() const;
  std::string kind_name() const;
  void validate() const;
};

SurfaceSpec::Kind surface_kind_from_name(const std::string& name);

/// Analytic chart for a catalog surface.
Immersion make_immersion(const SurfaceSpec& spec);

/// max |H| over the samples. Graphs use the divergence form of the minimal
/// surface operator divided by n; catalog charts use the point frame.
double minimality_residual(const SurfaceSpec& spec, const std::vector<Vec>& samples);

/// Pointwise divergence-form operator div(Df / √(1+|Df|²)) of a graph.
double graph_mean_curvature_operator(const GraphFunctionSpec& g, const Vec& q);

struct CatenoidInequalityRow {
  double t = 0;
  double sinh_cosh = 0;    // sinh t cosh t, compared with t
  double t_cosh = 0;       // t cosh t, compared with sinh t
  double sinh = 0;
  bool first_holds = false;   // t ≤ sinh t cosh t
  bool second_holds = false;  // sinh t ≤ t cosh t
  bool equality = false;      // both are equalities (t = 0)
};

struct CatenoidInequalityVerdict {
  std::vector<CatenoidInequalityRow> rows;
  bool strict_for_positive_t = true;
  bool equality_only_at_zero = true;
};

CatenoidInequalityVerdict catenoid_inequalities(const std::vector<double>& t_grid);

/// Uniform random chart points inside the truncation (deterministic per seed).
std::vector<Vec> sample_chart(const ChartDomain& domain, int count, unsigned seed, double shrink = 0.98);

}  // namespace minlap
