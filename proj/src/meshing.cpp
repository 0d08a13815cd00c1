#include "minlap/meshing.hpp"

#include "minlap/error.hpp"
#include "minlap/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

namespace minlap {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double tri_area(const Vec& a, const Vec& b, const Vec& c) {
  const Vec u = b - a, v = c - a;
  const double uu = u.squaredNorm(), vv = v.squaredNorm(), uv = u.dot(v);
  return 0.5 * std::sqrt(std::max(uu * vv - uv * uv, 0.0));
}

/// Triangles between two concentric rings of sizes m (inner) and M (outer);
/// vertex i of a ring of size s sits at angle 2πi/s. An inner ring of size 1 is the center.
void stitch_rings(int inner0, int m, int outer0, int M, std::vector<std::array<int, 3>>& tris) {
  if (m == 1) {
    for (int j = 0; j < M; ++j) tris.push_back({inner0, outer0 + j, outer0 + (j + 1) % M});
    return;
  }
  int i = 0, j = 0;
  while (i < m || j < M) {
    // Compare the angles of the next inner and next outer vertices (exact rationals).
    const bool advance_outer = (i == m) || (j < M && static_cast<long>(j + 1) * m <= static_cast<long>(i + 1) * M);
    if (advance_outer) {
      tris.push_back({inner0 + i % m, outer0 + j, outer0 + (j + 1) % M});
      ++j;
    } else {
      tris.push_back({inner0 + i, outer0 + j % M, inner0 + (i + 1) % m});
      ++i;
    }
  }
}

void embed(const Immersion& imm, TriMesh& mesh) {
  mesh.points.resize(mesh.chart.size());
  parallel_for(mesh.chart.size(), [&](std::size_t i) { mesh.points[i] = imm.point(mesh.chart[i]); });
}

void check_triangles(const TriMesh& mesh) {
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    if (!(mesh.triangle_area(t) > 1e-14)) fail(ErrorCode::DegenerateChart, "mesh triangle collapses");
}

/// Polar mesh: rings k = 1..res of 4k vertices at radius (k/res) ρ*(φ);
/// rho_at receives the vertex index i and the ring size 4k.
template <class Radius>
TriMesh polar_mesh(const Vec& center, int res, const Radius& rho_at) {
  TriMesh mesh;
  mesh.chart.push_back(center);
  mesh.boundary.push_back(false);
  for (int k = 1; k <= res; ++k) {
    const int count = 4 * k;
    for (int i = 0; i < count; ++i) {
      const double phi = kTwoPi * i / count;
      const double rho = static_cast<double>(k) / res * rho_at(i, count);
      Vec q = center;
      q[0] += rho * std::cos(phi);
      q[1] += rho * std::sin(phi);
      mesh.chart.push_back(q);
      mesh.boundary.push_back(k == res);
    }
  }
  int inner0 = 0, m = 1;
  for (int k = 1; k <= res; ++k) {
    const int outer0 = inner0 + m;
    stitch_rings(inner0, m, outer0, 4 * k, mesh.triangles);
    inner0 = outer0;
    m = 4 * k;
  }
  return mesh;
}

/// Largest ρ such that center + ρ·(cos φ, sin φ) stays in the chart.
double chart_exit(const ChartDomain& d, const Vec& center, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  if (d.kind == ChartDomain::Kind::Ball) {
    const Eigen::Vector2d w = (center - d.center).head<2>();
    const double b = w[0] * c + w[1] * s;
    const double disc = b * b - (w.squaredNorm() - d.radius * d.radius);
    return -b + std::sqrt(std::max(disc, 0.0));
  }
  double t = std::numeric_limits<double>::infinity();
  const double dir[2] = {c, s};
  for (int k = 0; k < 2; ++k) {
    if (d.periodic[static_cast<std::size_t>(k)]) continue;
    if (dir[k] > 1e-15) t = std::min(t, (d.hi[k] - center[k]) / dir[k]);
    if (dir[k] < -1e-15) t = std::min(t, (d.lo[k] - center[k]) / dir[k]);
  }
  return t;
}

/// First sign change of g on [lo, hi] from negative to nonnegative; scans, then bisects.
template <class G>
double first_crossing(const G& g, double lo, double hi, int scan = 64) {
  double a = lo, ga = g(lo);
  for (int i = 1; i <= scan; ++i) {
    double b = lo + (hi - lo) * i / scan;
    const double gb = g(b);
    if (ga < 0 && gb >= 0) {
      for (int it = 0; it < 200 && (b - a) > 1e-15 * (1 + std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        if (g(mid) < 0) a = mid;
        else b = mid;
      }
      return 0.5 * (a + b);
    }
    a = b;
    ga = gb;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::size_t TriMesh::interior_count() const {
  return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), false));
}

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return tri_area(points[static_cast<std::size_t>(tri[0])], points[static_cast<std::size_t>(tri[1])],
                  points[static_cast<std::size_t>(tri[2])]);
}

double TriMesh::area() const {
  double a = 0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
  return a;
}

double TriMesh::max_edge_length() const {
  double h = 0;
  for (const auto& tri : triangles)
    for (int k = 0; k < 3; ++k)
      h = std::max(h, (points[static_cast<std::size_t>(tri[k])] - points[static_cast<std::size_t>(tri[(k + 1) % 3])]).norm());
  return h;
}

TriMesh triangulate(const Immersion& imm, int resolution) {
  require(resolution >= 2, ErrorCode::InvalidArgument, "mesh resolution must be at least 2");
  require(imm.dim == 2, ErrorCode::InvalidArgument, "meshing supports two-dimensional charts");
  const ChartDomain& d = imm.domain;
  TriMesh mesh;
  if (d.kind == ChartDomain::Kind::Ball) {
    mesh = polar_mesh(d.center, resolution, [&](int, int) { return d.radius; });
  } else {
    const double len0 = d.hi[0] - d.lo[0], len1 = d.hi[1] - d.lo[1];
    const double longest = std::max(len0, len1);
    const int n0 = std::max(d.periodic[0] ? 3 : 1, static_cast<int>(std::lround(resolution * len0 / longest)));
    const int n1 = std::max(d.periodic[1] ? 3 : 1, static_cast<int>(std::lround(resolution * len1 / longest)));
    const int c0 = d.periodic[0] ? n0 : n0 + 1;
    const int c1 = d.periodic[1] ? n1 : n1 + 1;
    for (int i = 0; i < c0; ++i)
      for (int j = 0; j < c1; ++j) {
        Vec q(2);
        q << d.lo[0] + len0 * i / n0, d.lo[1] + len1 * j / n1;
        mesh.chart.push_back(q);
        const bool edge0 = !d.periodic[0] && (i == 0 || i == n0);
        const bool edge1 = !d.periodic[1] && (j == 0 || j == n1);
        mesh.boundary.push_back(edge0 || edge1);
      }
    const auto id = [&](int i, int j) { return (i % c0) * c1 + (j % c1); };
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j) {
        const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), e = id(i, j + 1);
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, e});
      }
  }
  embed(imm, mesh);
  check_triangles(mesh);
  return mesh;
}

TriMesh ball_mesh(const Immersion& imm, const BasePoint& base, double r, int resolution) {
  require(resolution >= 2, ErrorCode::InvalidArgument, "mesh resolution must be at least 2");
  require(r > 0, ErrorCode::InvalidArgument, "ball radius must be positive");
  require(imm.dim == 2, ErrorCode::InvalidArgument, "meshing supports two-dimensional charts");
  const ChartDomain& d = imm.domain;
  const auto rt = [&](const Vec& q) { return (imm.point(q) - base.ambient).norm(); };
  TriMesh mesh;
  const bool band = d.kind == ChartDomain::Kind::Rectangle && d.periodic[1] && !d.periodic[0];
  if (!band) {
    Vec center;
    if (base.on_surface) center = *base.on_surface;
    else if (d.kind == ChartDomain::Kind::Ball) center = d.center;
    else center = 0.5 * (d.lo + d.hi);
    require(rt(center) < r, ErrorCode::InvalidArgument, "ball does not contain the mesh center");
    const auto rho_star = [&](double phi) {
      const double exit = chart_exit(d, center, phi);
      const Vec dir = (Vec(2) << std::cos(phi), std::sin(phi)).finished();
      const auto g = [&](double rho) { return rt(center + rho * dir) - r; };
      if (!std::isfinite(exit) || g(exit) < 0)
        fail(ErrorCode::TruncationTooSmall, "extrinsic ball reaches the chart boundary");
      return first_crossing(g, 0.0, exit);
    };
    // ρ* on the angles of the outer ring; inner-ring angles mostly coincide with these.
    const int outer = 4 * resolution;
    std::vector<double> rho(static_cast<std::size_t>(outer));
    parallel_for(rho.size(), [&](std::size_t i) { rho[i] = rho_star(kTwoPi * static_cast<double>(i) / outer); });
    mesh = polar_mesh(center, resolution, [&](int i, int count) {
      // Angle 2πi/count is on the cached outer ring when count divides i·outer.
      const long num = static_cast<long>(i) * outer;
      return num % count == 0 ? rho[static_cast<std::size_t>(num / count)] : rho_star(kTwoPi * i / count);
    });
  } else {
    const int ntheta = 4 * resolution;
    const double period = d.hi[1] - d.lo[1];
    std::vector<double> t_lo(static_cast<std::size_t>(ntheta)), t_hi(static_cast<std::size_t>(ntheta));
    parallel_for(static_cast<std::size_t>(ntheta), [&](std::size_t j) {
      const double theta = d.lo[1] + period * static_cast<double>(j) / ntheta;
      const auto at = [&](double t) { return (Vec(2) << t, theta).finished(); };
      // Start from the column point closest to the base.
      double t0 = d.lo[0], best = std::numeric_limits<double>::infinity();
      const int scan = 512;
      for (int i = 0; i <= scan; ++i) {
        const double t = d.lo[0] + (d.hi[0] - d.lo[0]) * i / scan;
        const double v = rt(at(t));
        if (v < best) best = v, t0 = t;
      }
      if (!(best < r)) fail(ErrorCode::InvalidArgument, "extrinsic ball misses an angular column");
      const auto up = [&](double t) { return rt(at(t)) - r; };
      const auto down = [&](double s) { return rt(at(t0 - s)) - r; };
      if (up(d.hi[0]) < 0 || down(t0 - d.lo[0]) < 0)
        fail(ErrorCode::TruncationTooSmall, "extrinsic ball reaches the chart boundary");
      t_hi[j] = first_crossing(up, t0, d.hi[0]);
      t_lo[j] = t0 - first_crossing(down, 0.0, t0 - d.lo[0]);
    });
    double span = 0;
    for (int j = 0; j < ntheta; ++j) span = std::max(span, t_hi[static_cast<std::size_t>(j)] - t_lo[static_cast<std::size_t>(j)]);
    const int nt = std::max(2, static_cast<int>(std::lround(ntheta * span / period)));
    for (int j = 0; j < ntheta; ++j)
      for (int i = 0; i <= nt; ++i) {
        const double lo = t_lo[static_cast<std::size_t>(j)], hi = t_hi[static_cast<std::size_t>(j)];
        Vec q(2);
        q << lo + (hi - lo) * i / nt, d.lo[1] + period * j / ntheta;
        mesh.chart.push_back(q);
        mesh.boundary.push_back(i == 0 || i == nt);
      }
    const auto id = [&](int i, int j) { return (j % ntheta) * (nt + 1) + i; };
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < ntheta; ++j) {
        const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), e = id(i, j + 1);
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, e});
      }
  }
  embed(imm, mesh);
  mesh.r_tilde.resize(mesh.points.size());
  for (std::size_t i = 0; i < mesh.points.size(); ++i) mesh.r_tilde[i] = (mesh.points[i] - base.ambient).norm();
  check_triangles(mesh);
  return mesh;
}

FemPair assemble(const TriMesh& mesh) {
  const std::size_t nt = mesh.triangles.size();
  std::vector<std::array<double, 9>> k_loc(nt), m_loc(nt);
  parallel_for(nt, [&](std::size_t t) {
    const auto& tri = mesh.triangles[t];
    const Vec& p0 = mesh.points[static_cast<std::size_t>(tri[0])];
    const Vec& p1 = mesh.points[static_cast<std::size_t>(tri[1])];
    const Vec& p2 = mesh.points[static_cast<std::size_t>(tri[2])];
    const double area = tri_area(p0, p1, p2);
    if (!(area > 1e-14)) fail(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(t) + " is degenerate");
    const Vec e[3] = {p2 - p1, p0 - p2, p1 - p0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        k_loc[t][static_cast<std::size_t>(3 * i + j)] = e[i].dot(e[j]) / (4 * area);
        m_loc[t][static_cast<std::size_t>(3 * i + j)] = area / 12.0 * (i == j ? 2.0 : 1.0);
      }
  });
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(9 * nt);
  mt.reserve(9 * nt);
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int a = mesh.triangles[t][static_cast<std::size_t>(i)], b = mesh.triangles[t][static_cast<std::size_t>(j)];
        kt.emplace_back(a, b, k_loc[t][static_cast<std::size_t>(3 * i + j)]);
        mt.emplace_back(a, b, m_loc[t][static_cast<std::size_t>(3 * i + j)]);
      }
  const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
  FemPair pair;
  pair.K.resize(n, n);
  pair.M.resize(n, n);
  pair.K.setFromTriplets(kt.begin(), kt.end());
  pair.M.setFromTriplets(mt.begin(), mt.end());
  pair.dirichlet_map.assign(mesh.vertex_count(), -1);
  int next = 0;
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i)
    if (!mesh.boundary[i]) pair.dirichlet_map[i] = next++;
  return pair;
}

Pencil dirichlet_reduce(const FemPair& pair) {
  int interior = 0;
  for (int v : pair.dirichlet_map) interior += v >= 0;
  const auto reduce = [&](const SparseMat& A) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int col = 0; col < A.outerSize(); ++col)
      for (SparseMat::InnerIterator it(A, col); it; ++it) {
        const int i = pair.dirichlet_map[static_cast<std::size_t>(it.row())];
        const int j = pair.dirichlet_map[static_cast<std::size_t>(it.col())];
        if (i >= 0 && j >= 0) trips.emplace_back(i, j, it.value());
      }
    SparseMat out(interior, interior);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
  };
  return {reduce(pair.K), reduce(pair.M)};
}

quadrature::Options quadrature_options(int level) {
  quadrature::Options o;
  o.level = level;
  o.max_depth = 6;
  o.gauss_points = 4;
  return o;
}

double extrinsic_ball_volume(const Immersion& imm, const BasePoint& base, double r, int level) {
  require(r > 0, ErrorCode::InvalidArgument, "ball radius must be positive");
  const auto res = quadrature::integrate(
      imm, quadrature::Region::ball(base.ambient, r), 1, [](const Vec&, const Jet&, double* out) { out[0] = 1.0; },
      0, {}, quadrature_options(level));
  if (res.min_phi_on_chart_edge < 0)
    fail(ErrorCode::TruncationTooSmall, "extrinsic ball of radius " + std::to_string(r) + " leaves the chart");
  return res.domain[0];
}

void write_off(const TriMesh& mesh, std::ostream& out) {
  const auto num = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
  };
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangles.size() << " 0\n";
  for (const Vec& p : mesh.points) {
    for (Eigen::Index k = 0; k < 3; ++k) out << (k ? " " : "") << num(k < p.size() ? p[k] : 0.0);
    out << '\n';
  }
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_off(const TriMesh& mesh, const std::string& path) {
  std::ofstream f(path);
  require(static_cast<bool>(f), ErrorCode::InvalidArgument, "cannot open " + path);
  write_off(mesh, f);
}

}  // namespace minlap
