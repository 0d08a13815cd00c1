#include "minlap/surfaces.hpp"

#include "minlap/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace minlap {

GraphFunctionSpec GraphFunctionSpec::zero(int n) {
  GraphFunctionSpec g = linear(std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0);
  g.label = "zero";
  g.family = "zero";
  return g;
}

GraphFunctionSpec GraphFunctionSpec::linear(std::vector<double> coefficients, double offset) {
  require(!coefficients.empty(), ErrorCode::InvalidArgument, "linear graph needs coefficients");
  const int n = static_cast<int>(coefficients.size());
  const Vec a = Eigen::Map<const Vec>(coefficients.data(), n);
  GraphFunctionSpec g;
  g.n = n;
  g.f = [a, offset](const Vec& q) { return a.dot(q) + offset; };
  g.Df = [a](const Vec&) { return a; };
  g.D2f = [n](const Vec&) { return Mat::Zero(n, n); };
  g.label = "linear";
  g.minimal = true;
  g.family = "linear";
  g.coefficients = std::move(coefficients);
  g.offset = offset;
  return g;
}

namespace {

GraphFunctionSpec first_coordinate_power(int n, int power, double scale, std::string family) {
  require(n >= 1, ErrorCode::InvalidArgument, "graph dimension must be positive");
  GraphFunctionSpec g;
  g.n = n;
  g.f = [power, scale](const Vec& q) { return scale * std::pow(q[0], power); };
  g.Df = [n, power, scale](const Vec& q) {
    Vec d = Vec::Zero(n);
    d[0] = scale * power * std::pow(q[0], power - 1);
    return d;
  };
  g.D2f = [n, power, scale](const Vec& q) {
    Mat h = Mat::Zero(n, n);
    h(0, 0) = power >= 2 ? scale * power * (power - 1) * std::pow(q[0], power - 2) : 0.0;
    return h;
  };
  g.minimal = false;
  g.label = family;
  g.family = std::move(family);
  return g;
}

}  // namespace

GraphFunctionSpec GraphFunctionSpec::paraboloid(int n) { return first_coordinate_power(n, 2, 0.5, "paraboloid"); }
GraphFunctionSpec GraphFunctionSpec::square(int n) { return first_coordinate_power(n, 2, 1.0, "square"); }
GraphFunctionSpec GraphFunctionSpec::cubic(int n) { return first_coordinate_power(n, 3, 1.0, "cubic"); }

GraphFunctionSpec GraphFunctionSpec::scherk() {
  GraphFunctionSpec g;
  g.n = 2;
  g.f = [](const Vec& q) { return std::log(std::cos(q[1]) / std::cos(q[0])); };
  g.Df = [](const Vec& q) { return Vec(Eigen::Vector2d(std::tan(q[0]), -std::tan(q[1]))); };
  g.D2f = [](const Vec& q) {
    const double sx = 1.0 / std::cos(q[0]), sy = 1.0 / std::cos(q[1]);
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = sx * sx;
    h(1, 1) = -sy * sy;
    return h;
  };
  g.minimal = true;
  g.label = "scherk";
  g.family = "scherk";
  g.max_chart_radius = std::numbers::pi / 2;
  return g;
}

GraphFunctionSpec GraphFunctionSpec::from_family(const std::string& family, int n, std::vector<double> coefficients,
                                                 double offset) {
  if (family == "zero") return zero(n);
  if (family == "linear") {
    if (coefficients.empty()) coefficients.assign(static_cast<std::size_t>(n), 0.0);
    require(static_cast<int>(coefficients.size()) == n, ErrorCode::InvalidArgument,
            "linear graph coefficient count must equal n");
    return linear(std::move(coefficients), offset);
  }
  if (family == "paraboloid") return paraboloid(n);
  if (family == "square") return square(n);
  if (family == "cubic") return cubic(n);
  if (family == "scherk") {
    require(n == 2, ErrorCode::InvalidArgument, "scherk graph is two-dimensional");
    return scherk();
  }
  fail(ErrorCode::UnsupportedKind, "unknown graph family '" + family + "'");
}

SurfaceSpec SurfaceSpec::plane(int n, double radius) {
  SurfaceSpec s;
  s.kind = Kind::Plane;
  s.n = n;
  s.truncation.radius = radius;
  return s;
}

SurfaceSpec SurfaceSpec::graph_of(GraphFunctionSpec g, double radius) {
  SurfaceSpec s;
  s.kind = Kind::Graph;
  s.n = g.n;
  s.graph = std::move(g);
  s.truncation.radius = radius;
  return s;
}

SurfaceSpec SurfaceSpec::catenoid(double neck_radius, double t_max) {
  SurfaceSpec s;
  s.kind = Kind::Catenoid;
  s.n = 2;
  s.neck_radius = neck_radius;
  s.truncation.t_max = t_max;
  return s;
}

SurfaceSpec SurfaceSpec::helicoid(double pitch, double s_max, double theta_max) {
  SurfaceSpec s;
  s.kind = Kind::Helicoid;
  s.n = 2;
  s.pitch = pitch;
  s.truncation.radius = s_max;
  s.truncation.t_max = theta_max;
  return s;
}

bool SurfaceSpec::minimal() const {
  if (kind == Kind::Graph) return graph && graph->minimal;
  return true;
}

std::string SurfaceSpec::kind_name() const {
  switch (kind) {
    case Kind::Plane: return "plane";
    case Kind::Graph: return "graph";
    case Kind::Catenoid: return "catenoid";
    case Kind::Helicoid: return "helicoid";
  }
  return "unknown";
}

SurfaceSpec::Kind surface_kind_from_name(const std::string& name) {
  if (name == "plane") return SurfaceSpec::Kind::Plane;
  if (name == "graph") return SurfaceSpec::Kind::Graph;
  if (name == "catenoid") return SurfaceSpec::Kind::Catenoid;
  if (name == "helicoid") return SurfaceSpec::Kind::Helicoid;
  fail(ErrorCode::UnsupportedKind, "unknown surface kind '" + name + "'");
}

namespace {

bool positive_finite(const std::optional<double>& v) { return v && std::isfinite(*v) && *v > 0; }

}  // namespace

void SurfaceSpec::validate() const {
  require(n >= 1, ErrorCode::InvalidArgument, "surface dimension must be positive");
  switch (kind) {
    case Kind::Plane:
      require(positive_finite(truncation.radius), ErrorCode::InvalidArgument, "plane needs a positive chart radius");
      break;
    case Kind::Graph:
      require(graph.has_value(), ErrorCode::InvalidArgument, "graph surface needs a function");
      require(graph->n == n, ErrorCode::InvalidArgument, "graph dimension mismatch");
      require(positive_finite(truncation.radius), ErrorCode::InvalidArgument, "graph needs a positive chart radius");
      require(*truncation.radius < graph->max_chart_radius, ErrorCode::InvalidArgument,
              "chart radius exceeds the domain of the graph function");
      break;
    case Kind::Catenoid:
      require(n == 2, ErrorCode::InvalidArgument, "catenoid is two-dimensional");
      require(std::isfinite(neck_radius) && neck_radius > 0, ErrorCode::InvalidArgument,
              "catenoid neck radius must be positive");
      require(positive_finite(truncation.t_max), ErrorCode::InvalidArgument, "catenoid needs a positive t_max");
      break;
    case Kind::Helicoid:
      require(n == 2, ErrorCode::InvalidArgument, "helicoid is two-dimensional");
      require(std::isfinite(pitch) && pitch > 0, ErrorCode::InvalidArgument, "helicoid pitch must be positive");
      require(positive_finite(truncation.radius) && positive_finite(truncation.t_max), ErrorCode::InvalidArgument,
              "helicoid needs positive s and angle bounds");
      break;
  }
}

namespace {

Immersion graph_immersion(const GraphFunctionSpec& g, double radius) {
  Immersion imm;
  imm.dim = g.n;
  imm.domain = ChartDomain::ball(Vec::Zero(g.n), radius);
  imm.jet_fn = [g](const Vec& q) {
    const int n = g.n;
    Jet jet;
    jet.point.resize(n + 1);
    jet.point.head(n) = q;
    jet.point[n] = g.f(q);
    jet.first = Mat::Zero(n + 1, n);
    jet.first.topRows(n).setIdentity();
    jet.first.row(n) = g.Df(q).transpose();
    jet.second = Mat::Zero(n + 1, n * n);
    const Mat h = g.D2f(q);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) jet.second(n, i * n + j) = h(i, j);
    return jet;
  };
  return imm;
}

Immersion catenoid_immersion(double c, double t_max) {
  Immersion imm;
  imm.dim = 2;
  imm.domain = ChartDomain::rectangle(Eigen::Vector2d(-t_max, 0.0), Eigen::Vector2d(t_max, 2 * std::numbers::pi),
                                      {false, true});
  imm.jet_fn = [c](const Vec& q) {
    const double t = q[0], th = q[1];
    const double ch = std::cosh(t / c), sh = std::sinh(t / c);
    const double ct = std::cos(th), st = std::sin(th);
    Jet jet;
    jet.point = Eigen::Vector3d(c * ch * ct, c * ch * st, t);
    jet.first.resize(3, 2);
    jet.first.col(0) = Eigen::Vector3d(sh * ct, sh * st, 1.0);
    jet.first.col(1) = Eigen::Vector3d(-c * ch * st, c * ch * ct, 0.0);
    jet.second.resize(3, 4);
    jet.second.col(0) = Eigen::Vector3d(ch / c * ct, ch / c * st, 0.0);
    jet.second.col(1) = Eigen::Vector3d(-sh * st, sh * ct, 0.0);
    jet.second.col(2) = jet.second.col(1);
    jet.second.col(3) = Eigen::Vector3d(-c * ch * ct, -c * ch * st, 0.0);
    return jet;
  };
  return imm;
}

Immersion helicoid_immersion(double p, double s_max, double theta_max) {
  Immersion imm;
  imm.dim = 2;
  imm.domain = ChartDomain::rectangle(Eigen::Vector2d(-s_max, -theta_max), Eigen::Vector2d(s_max, theta_max));
  imm.jet_fn = [p](const Vec& q) {
    const double s = q[0], th = q[1];
    const double ct = std::cos(th), st = std::sin(th);
    Jet jet;
    jet.point = Eigen::Vector3d(s * ct, s * st, p * th);
    jet.first.resize(3, 2);
    jet.first.col(0) = Eigen::Vector3d(ct, st, 0.0);
    jet.first.col(1) = Eigen::Vector3d(-s * st, s * ct, p);
    jet.second.resize(3, 4);
    jet.second.col(0) = Eigen::Vector3d::Zero();
    jet.second.col(1) = Eigen::Vector3d(-st, ct, 0.0);
    jet.second.col(2) = jet.second.col(1);
    jet.second.col(3) = Eigen::Vector3d(-s * ct, -s * st, 0.0);
    return jet;
  };
  return imm;
}

}  // namespace

Immersion make_immersion(const SurfaceSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SurfaceSpec::Kind::Plane: return graph_immersion(GraphFunctionSpec::zero(spec.n), *spec.truncation.radius);
    case SurfaceSpec::Kind::Graph: return graph_immersion(*spec.graph, *spec.truncation.radius);
    case SurfaceSpec::Kind::Catenoid: return catenoid_immersion(spec.neck_radius, *spec.truncation.t_max);
    case SurfaceSpec::Kind::Helicoid:
      return helicoid_immersion(spec.pitch, *spec.truncation.radius, *spec.truncation.t_max);
  }
  fail(ErrorCode::UnsupportedKind, "unsupported surface kind");
}

double graph_mean_curvature_operator(const GraphFunctionSpec& g, const Vec& q) {
  const Vec df = g.Df(q);
  const Mat d2 = g.D2f(q);
  const double w2 = 1.0 + df.squaredNorm();
  return (d2.trace() * w2 - df.dot(d2 * df)) / std::pow(w2, 1.5);
}

double minimality_residual(const SurfaceSpec& spec, const std::vector<Vec>& samples) {
  double worst = 0.0;
  if (spec.kind == SurfaceSpec::Kind::Graph || spec.kind == SurfaceSpec::Kind::Plane) {
    const GraphFunctionSpec g = spec.kind == SurfaceSpec::Kind::Graph ? *spec.graph : GraphFunctionSpec::zero(spec.n);
    for (const Vec& q : samples) worst = std::max(worst, std::abs(graph_mean_curvature_operator(g, q)) / spec.n);
    return worst;
  }
  const Immersion imm = make_immersion(spec);
  for (const Vec& q : samples) worst = std::max(worst, std::abs(point_frame(imm, q).mean_curvature));
  return worst;
}

CatenoidInequalityVerdict catenoid_inequalities(const std::vector<double>& t_grid) {
  CatenoidInequalityVerdict v;
  for (double t : t_grid) {
    require(t >= 0, ErrorCode::InvalidArgument, "catenoid inequality grid must be nonnegative");
    CatenoidInequalityRow row;
    row.t = t;
    row.sinh = std::sinh(t);
    row.sinh_cosh = std::sinh(t) * std::cosh(t);
    row.t_cosh = t * std::cosh(t);
    row.first_holds = t <= row.sinh_cosh;
    row.second_holds = row.sinh <= row.t_cosh;
    row.equality = (t == row.sinh_cosh) && (row.sinh == row.t_cosh);
    if (t > 0 && !(t < row.sinh_cosh && row.sinh < row.t_cosh)) v.strict_for_positive_t = false;
    if (row.equality && t != 0) v.equality_only_at_zero = false;
    if (t == 0 && !row.equality) v.equality_only_at_zero = false;
    v.rows.push_back(row);
  }
  return v;
}

std::vector<Vec> sample_chart(const ChartDomain& domain, int count, unsigned seed, double shrink) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  const int n = domain.dim();
  while (static_cast<int>(out.size()) < count) {
    Vec q(n);
    if (domain.kind == ChartDomain::Kind::Rectangle) {
      for (int i = 0; i < n; ++i) {
        const double mid = 0.5 * (domain.lo[i] + domain.hi[i]);
        const double half = 0.5 * (domain.hi[i] - domain.lo[i]) * shrink;
        q[i] = mid + (2 * unit(rng) - 1) * half;
      }
    } else {
      for (int i = 0; i < n; ++i) q[i] = 2 * unit(rng) - 1;
      if (q.norm() > 1.0) continue;
      q = domain.center + domain.radius * shrink * q;
    }
    out.push_back(q);
  }
  return out;
}

}  // namespace minlap
