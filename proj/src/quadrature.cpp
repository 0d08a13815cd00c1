#include "minlap/quadrature.hpp"

#include "minlap/error.hpp"
#include "minlap/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace minlap::quadrature {

Region Region::whole() {
  Region r;
  r.phi = [](const Vec&) { return -1.0; };
  r.lipschitz = 0.0;
  return r;
}

Region Region::ball(Vec center, double radius) {
  require(radius > 0, ErrorCode::InvalidArgument, "ball radius must be positive");
  Region r;
  r.phi = [center, radius](const Vec& x) { return (x - center).norm() - radius; };
  r.gradient = [center](const Vec& x) {
    const Vec d = x - center;
    const double len = d.norm();
    return len > 0 ? Vec(d / len) : Vec(Vec::Zero(d.size()));
  };
  r.curvature = [center](const Vec& x) {
    const double len = (x - center).norm();
    return len > 0 ? 1.0 / len : std::numeric_limits<double>::infinity();
  };
  r.lipschitz = 1.0;
  return r;
}

void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights) {
  switch (points) {
    case 1:
      nodes = {0.0};
      weights = {2.0};
      return;
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      nodes = {-a, a};
      weights = {1.0, 1.0};
      return;
    }
    case 3: {
      const double a = std::sqrt(0.6);
      nodes = {-a, 0.0, a};
      weights = {5.0 / 9, 8.0 / 9, 5.0 / 9};
      return;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7 - 2.0 / 7 * std::sqrt(1.2));
      const double b = std::sqrt(3.0 / 7 + 2.0 / 7 * std::sqrt(1.2));
      const double wa = (18 + std::sqrt(30.0)) / 36, wb = (18 - std::sqrt(30.0)) / 36;
      nodes = {-b, -a, a, b};
      weights = {wb, wa, wa, wb};
      return;
    }
    case 5: {
      const double a = std::sqrt(5 - 2 * std::sqrt(10.0 / 7)) / 3;
      const double b = std::sqrt(5 + 2 * std::sqrt(10.0 / 7)) / 3;
      const double wa = (322 + 13 * std::sqrt(70.0)) / 900, wb = (322 - 13 * std::sqrt(70.0)) / 900;
      nodes = {-b, -a, 0.0, a, b};
      weights = {wb, wa, 128.0 / 225, wa, wb};
      return;
    }
    default: fail(ErrorCode::InvalidArgument, "gauss_legendre supports 1 to 5 points");
  }
}

namespace {

using P2 = Eigen::Vector2d;
using M2 = Eigen::Matrix2d;

/// Parameter rectangle mapped onto the chart: identity for rectangles, polar
/// coordinates (ρ, φ) for disks.
struct ParamSpace {
  bool polar = false;
  P2 lo, hi;
  std::array<bool, 2> periodic{false, false};
  P2 center = P2::Zero();

  explicit ParamSpace(const ChartDomain& d) {
    if (d.kind == ChartDomain::Kind::Ball) {
      polar = true;
      center = d.center;
      lo = P2(0.0, 0.0);
      hi = P2(d.radius, 2 * std::numbers::pi);
      periodic = {false, true};
    } else {
      lo = d.lo;
      hi = d.hi;
      periodic = {d.periodic[0], d.periodic[1]};
    }
  }

  Vec chart(const P2& p) const {
    if (!polar) return Vec(p);
    return Vec(center + p[0] * P2(std::cos(p[1]), std::sin(p[1])));
  }

  M2 jacobian(const P2& p) const {
    if (!polar) return M2::Identity();
    const double c = std::cos(p[1]), s = std::sin(p[1]);
    M2 j;
    j << c, -p[0] * s, s, p[0] * c;
    return j;
  }

  /// Outward parameter normal of the chart edge that the point lies on (zero if none).
  P2 edge_normal(const P2& p) const {
    const double tol = 1e-12;
    for (int d = 0; d < 2; ++d) {
      if (periodic[d]) continue;
      const double scale = hi[d] - lo[d];
      if (polar && d == 0 && std::abs(p[0] - lo[0]) <= tol * scale) continue;  // ρ = 0 is not an edge
      if (std::abs(p[d] - lo[d]) <= tol * scale) return d == 0 ? P2(-1, 0) : P2(0, -1);
      if (std::abs(p[d] - hi[d]) <= tol * scale) return d == 0 ? P2(1, 0) : P2(0, 1);
    }
    return P2::Zero();
  }
};

struct Node {
  Vec q;
  Jet jet;
  double phi = 0;
};

struct Engine {
  const Immersion& imm;
  const Region& region;
  ParamSpace space;
  std::size_t nd, nb;
  const DomainIntegrand& fd;
  const BoundaryIntegrand& fb;
  Options opt;
  std::vector<double> gl_x, gl_w;

  struct Acc {
    std::vector<double> values;
    double min_edge_phi = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
  };

  Node eval(const P2& p, Acc& acc) const {
    Node n;
    n.q = space.chart(p);
    n.jet = imm.jet(n.q);
    n.phi = region.phi(n.jet.point);
    ++acc.evaluations;
    if (space.edge_normal(p).squaredNorm() > 0) acc.min_edge_phi = std::min(acc.min_edge_phi, n.phi);
    return n;
  }

  /// Bound on |F(p + s) − F(p)| for |s_d| ≤ half_d from the parameter-column speeds.
  double displacement_bound(const P2& p, const Jet& jet, const P2& half) const {
    const Mat dfj = jet.first * space.jacobian(p);
    return dfj.col(0).norm() * half[0] + dfj.col(1).norm() * half[1];
  }

  M2 param_metric(const P2& p, const Jet& jet) const {
    const Mat dfj = jet.first * space.jacobian(p);
    return dfj.transpose() * dfj;
  }

  void add_domain(const P2& p, double weight, Acc& acc) const {
    if (nd == 0) {
      ++acc.evaluations;
      return;
    }
    const Node n = eval(p, acc);
    const double density = std::sqrt(std::max(param_metric(p, n.jet).determinant(), 0.0));
    if (density == 0.0) return;
    std::vector<double> vals(nd, 0.0);
    fd(n.q, n.jet, vals.data());
    for (std::size_t k = 0; k < nd; ++k) acc.values[k] += weight * density * vals[k];
  }

  /// Boundary segment u→v in parameter space with outward parameter covector `outward`.
  void add_boundary_segment(const P2& u, const P2& v, const P2& outward, Acc& acc) const {
    if (nb == 0) return;
    const P2 tau = v - u;
    if (tau.squaredNorm() == 0) return;
    std::vector<double> vals(nb, 0.0);
    for (std::size_t i = 0; i < gl_x.size(); ++i) {
      const double s = 0.5 * (gl_x[i] + 1.0);
      const P2 p = u + s * tau;
      const Node n = eval(p, acc);
      const M2 G = param_metric(p, n.jet);
      const double ds = std::sqrt(std::max(tau.dot(G * tau), 0.0));
      if (ds == 0.0) continue;
      P2 np = G.ldlt().solve(outward);
      const double norm = std::sqrt(np.dot(G * np));
      if (!(norm > 0)) continue;
      np /= norm;
      const Vec conormal = space.jacobian(p) * np;
      std::fill(vals.begin(), vals.end(), 0.0);
      fb(n.q, n.jet, conormal, vals.data());
      const double w = 0.5 * gl_w[i] * ds;
      for (std::size_t k = 0; k < nb; ++k) acc.values[nd + k] += w * vals[k];
    }
  }

  void gauss_cell(const P2& a, const P2& b, Acc& acc) const {
    const P2 half = 0.5 * (b - a);
    const P2 mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < gl_x.size(); ++i)
      for (std::size_t j = 0; j < gl_x.size(); ++j) {
        const P2 p(mid[0] + half[0] * gl_x[i], mid[1] + half[1] * gl_x[j]);
        add_domain(p, gl_w[i] * gl_w[j] * half[0] * half[1], acc);
      }
    // Cell edges on the chart boundary.
    const std::array<std::array<P2, 2>, 4> edges{{{P2(a[0], a[1]), P2(b[0], a[1])},
                                                  {P2(b[0], a[1]), P2(b[0], b[1])},
                                                  {P2(b[0], b[1]), P2(a[0], b[1])},
                                                  {P2(a[0], b[1]), P2(a[0], a[1])}}};
    for (const auto& e : edges) {
      const P2 n0 = space.edge_normal(e[0]);
      if (n0.squaredNorm() > 0 && n0 == space.edge_normal(e[1])) add_boundary_segment(e[0], e[1], n0, acc);
    }
  }

  void triangle_rule(const P2& x0, const P2& x1, const P2& x2, Acc& acc) const {
    const double area = 0.5 * std::abs((x1 - x0)[0] * (x2 - x0)[1] - (x1 - x0)[1] * (x2 - x0)[0]);
    if (area == 0.0) return;
    const double w = area / 3.0;
    add_domain((4 * x0 + x1 + x2) / 6.0, w, acc);
    add_domain((x0 + 4 * x1 + x2) / 6.0, w, acc);
    add_domain((x0 + x1 + 4 * x2) / 6.0, w, acc);
  }

  void clip_triangle(const std::array<P2, 3>& x, const std::array<double, 3>& f, Acc& acc) const {
    struct PolyVertex {
      P2 p;
      bool exit_crossing;
    };
    std::vector<PolyVertex> poly;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const bool in_i = f[i] <= 0, in_j = f[j] <= 0;
      if (in_i) poly.push_back({x[i], false});
      if (in_i != in_j) {
        const double t = f[i] / (f[i] - f[j]);
        poly.push_back({x[i] + t * (x[j] - x[i]), in_i});
      }
    }
    if (poly.size() < 3) return;
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) triangle_rule(poly[0].p, poly[k].p, poly[k + 1].p, acc);
    if (nb == 0) return;
    // Gradient of the linear interpolant: outward covector of the cut.
    M2 e;
    e.col(0) = x[1] - x[0];
    e.col(1) = x[2] - x[0];
    const P2 df(f[1] - f[0], f[2] - f[0]);
    const P2 grad = e.transpose().fullPivLu().solve(df);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const PolyVertex& u = poly[k];
      const PolyVertex& v = poly[(k + 1) % poly.size()];
      if (u.exit_crossing) {
        add_boundary_segment(u.p, v.p, grad, acc);
        continue;
      }
      const P2 n0 = space.edge_normal(u.p);
      if (n0.squaredNorm() > 0 && n0 == space.edge_normal(v.p)) add_boundary_segment(u.p, v.p, n0, acc);
    }
  }

  void process(const P2& a, const P2& b, int depth, Acc& acc) const {
    const std::array<P2, 4> corners{P2(a[0], a[1]), P2(b[0], a[1]), P2(b[0], b[1]), P2(a[0], b[1])};
    const P2 mid = 0.5 * (a + b);
    double phi_mid = -1.0;
    std::array<double, 4> phi_corner{-1.0, -1.0, -1.0, -1.0};
    double margin = 0.0;
    if (region.lipschitz > 0) {
      const Node c = eval(mid, acc);
      phi_mid = c.phi;
      const P2 half = 0.5 * (b - a);
      double reach = displacement_bound(mid, c.jet, half);
      double slope_hi = 0, slope_lo = std::numeric_limits<double>::infinity(), bend = 0;
      const auto directional = [&](const P2& p, const Node& n) {
        if (!region.gradient) return;
        const Mat dfj = n.jet.first * space.jacobian(p);
        const Vec g = region.gradient(n.jet.point);
        const double s = std::abs(g.dot(dfj.col(0))) * half[0] + std::abs(g.dot(dfj.col(1))) * half[1];
        slope_hi = std::max(slope_hi, s);
        slope_lo = std::min(slope_lo, s);
        bend = std::max(bend, region.curvature ? region.curvature(n.jet.point) : 0.0);
      };
      directional(mid, c);
      for (int k = 0; k < 4; ++k) {
        const Node n = eval(corners[static_cast<std::size_t>(k)], acc);
        phi_corner[static_cast<std::size_t>(k)] = n.phi;
        reach = std::max(reach, displacement_bound(corners[static_cast<std::size_t>(k)], n.jet, half));
        directional(corners[static_cast<std::size_t>(k)], n);
      }
      margin = 1.25 * region.lipschitz * reach;
      if (region.gradient) {
        // First-order change of phi across the cell, its spread over the samples,
        // and a second-order allowance from the level function's curvature.
        const double refined = 1.25 * (2 * slope_hi - slope_lo + 0.5 * bend * reach * reach);
        margin = std::min(margin, refined);
      }
    }
    if (phi_mid > margin) return;
    if (phi_mid < -margin) {
      gauss_cell(a, b, acc);
      return;
    }
    if (depth < opt.max_depth) {
      process(a, mid, depth + 1, acc);
      process(P2(mid[0], a[1]), P2(b[0], mid[1]), depth + 1, acc);
      process(P2(a[0], mid[1]), P2(mid[0], b[1]), depth + 1, acc);
      process(mid, b, depth + 1, acc);
      return;
    }
    clip_triangle({corners[0], corners[1], corners[2]}, {phi_corner[0], phi_corner[1], phi_corner[2]}, acc);
    clip_triangle({corners[0], corners[2], corners[3]}, {phi_corner[0], phi_corner[2], phi_corner[3]}, acc);
  }

  /// Whether a base cell may meet the region (cheap Lipschitz test at the center).
  bool may_intersect(const P2& a, const P2& b, Acc& acc) const {
    if (region.lipschitz <= 0) return true;
    const P2 mid = 0.5 * (a + b);
    const Node c = eval(mid, acc);
    const P2 half = 0.5 * (b - a);
    double reach = displacement_bound(mid, c.jet, half);
    for (const P2& p : {P2(a[0], a[1]), P2(b[0], a[1]), P2(b[0], b[1]), P2(a[0], b[1])}) {
      const Node n = eval(p, acc);
      if (n.phi <= 0) return true;
      reach = std::max(reach, displacement_bound(p, n.jet, half));
    }
    return c.phi <= 1.25 * region.lipschitz * reach;
  }
};

struct Window {
  P2 lo, hi;
};

/// Shrinks the parameter window to the flagged cells of an N×N grid over `w`.
Window fit_window(const Engine& eng, const Window& w, int N, bool periodic1, bool& empty, std::size_t& evals) {
  const P2 h = (w.hi - w.lo) / N;
  std::vector<char> flag(static_cast<std::size_t>(N * N), 0);
  std::vector<std::size_t> cell_evals(static_cast<std::size_t>(N * N), 0);
  parallel_for(flag.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / N, j = static_cast<int>(idx) % N;
    const P2 a(w.lo[0] + i * h[0], w.lo[1] + j * h[1]);
    Engine::Acc acc;
    flag[idx] = eng.may_intersect(a, a + h, acc) ? 1 : 0;
    cell_evals[idx] = acc.evaluations;
  });
  for (auto e : cell_evals) evals += e;
  int i_min = N, i_max = -1;
  std::vector<char> col(static_cast<std::size_t>(N), 0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (flag[static_cast<std::size_t>(i * N + j)]) {
        i_min = std::min(i_min, i);
        i_max = std::max(i_max, i);
        col[static_cast<std::size_t>(j)] = 1;
      }
  empty = i_max < 0;
  if (empty) return w;
  Window out = w;
  out.lo[0] = w.lo[0] + i_min * h[0];
  out.hi[0] = w.lo[0] + (i_max + 1) * h[0];
  // Second coordinate: shortest covering arc when periodic, else the span.
  int best_start = 0, best_len = 0;
  if (periodic1) {
    for (int s = 0; s < N; ++s) {
      if (col[static_cast<std::size_t>(s)]) continue;
      int len = 0;
      while (len < N && !col[static_cast<std::size_t>((s + len) % N)]) ++len;
      if (len > best_len) best_len = len, best_start = s;
    }
  }
  if (periodic1 && best_len > 0) {
    const int first = (best_start + best_len) % N;  // first flagged column after the gap
    out.lo[1] = w.lo[1] + first * h[1];
    out.hi[1] = out.lo[1] + (N - best_len) * h[1];
  } else if (!periodic1) {
    int j_min = N, j_max = -1;
    for (int j = 0; j < N; ++j)
      if (col[static_cast<std::size_t>(j)]) j_min = std::min(j_min, j), j_max = std::max(j_max, j);
    out.lo[1] = w.lo[1] + j_min * h[1];
    out.hi[1] = w.lo[1] + (j_max + 1) * h[1];
  }
  return out;
}

// Charts of dimension three and up are disks; they are swept by rays from the
// centre in hyperspherical angles, and the region crossings along each ray are
// bracketed on a uniform radial grid and refined by bisection.
Result integrate_rays(const Immersion& imm, const Region& region, std::size_t domain_values,
                      const DomainIntegrand& domain_integrand, std::size_t boundary_values, const Options& options) {
  require(imm.domain.kind == ChartDomain::Kind::Ball, ErrorCode::InvalidArgument,
          "higher-dimensional quadrature needs a disk chart");
  require(boundary_values == 0, ErrorCode::InvalidArgument,
          "boundary integrals need a two-dimensional chart");
  const int n = imm.dim;
  const double R = imm.domain.radius;
  std::vector<double> gx, gw;
  gauss_legendre(options.gauss_points, gx, gw);

  const int panels = std::max(1, (2 << options.level) >> (n - 3));
  auto composite = [&](double len, int count, std::vector<double>& x, std::vector<double>& w) {
    const double h = len / count;
    for (int p = 0; p < count; ++p)
      for (std::size_t k = 0; k < gx.size(); ++k) {
        x.push_back(h * (p + 0.5 * (gx[k] + 1)));
        w.push_back(0.5 * h * gw[k]);
      }
  };
  std::vector<double> tx, tw, px, pw;
  composite(std::numbers::pi, panels, tx, tw);
  composite(2 * std::numbers::pi, 2 * panels, px, pw);
  const std::size_t nt = tx.size(), np = px.size();
  std::size_t rays = np;
  for (int k = 0; k < n - 2; ++k) rays *= nt;

  const int samples = 8 << options.level;
  struct Acc {
    std::vector<double> values;
    double min_edge = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
  };
  std::vector<Acc> acc(rays);
  parallel_for(rays, [&](std::size_t idx) {
    Acc& a = acc[idx];
    a.values.assign(domain_values, 0.0);
    Vec dir(n);
    double ang_w = pw[idx % np], s = 1.0;
    std::size_t rest = idx / np;
    for (int k = 0; k < n - 2; ++k) {
      const std::size_t i = rest % nt;
      rest /= nt;
      dir[k] = s * std::cos(tx[i]);
      ang_w *= tw[i] * std::pow(std::sin(tx[i]), n - 2 - k);
      s *= std::sin(tx[i]);
    }
    const double phi_angle = px[idx % np];
    dir[n - 2] = s * std::cos(phi_angle);
    dir[n - 1] = s * std::sin(phi_angle);

    auto level_at = [&](double rho) {
      ++a.evaluations;
      return region.phi(imm.point(imm.domain.center + rho * dir));
    };
    std::vector<double> vals(domain_values);
    auto segment = [&](double lo, double hi) {
      const double half = 0.5 * (hi - lo);
      for (std::size_t k = 0; k < gx.size(); ++k) {
        const double rho = lo + half * (gx[k] + 1);
        const Vec q = imm.domain.center + rho * dir;
        const Jet jet = imm.jet(q);
        ++a.evaluations;
        const double density = std::sqrt(std::max((jet.first.transpose() * jet.first).determinant(), 0.0));
        std::fill(vals.begin(), vals.end(), 0.0);
        domain_integrand(q, jet, vals.data());
        const double w = ang_w * half * gw[k] * std::pow(rho, n - 1) * density;
        for (std::size_t v = 0; v < domain_values; ++v) a.values[v] += w * vals[v];
      }
    };
    auto root = [&](double lo, double hi, double flo) {
      for (int it = 0; it < 60 && hi - lo > 1e-15 * R; ++it) {
        const double mid = 0.5 * (lo + hi), fm = level_at(mid);
        if ((fm <= 0) == (flo <= 0)) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    };
    const double h = R / samples;
    double f0 = level_at(0.0);
    for (int i = 0; i < samples; ++i) {
      const double r0 = i * h, r1 = (i + 1) * h;
      const double f1 = level_at(r1);
      const bool in0 = f0 <= 0, in1 = f1 <= 0;
      if (in0 && in1) segment(r0, r1);
      else if (in0 != in1) {
        const double c = root(r0, r1, f0);
        if (in0) segment(r0, c);
        else segment(c, r1);
      }
      f0 = f1;
    }
    a.min_edge = f0;
  });

  Result result;
  result.domain.assign(domain_values, 0.0);
  for (const auto& a : acc) {
    for (std::size_t k = 0; k < domain_values; ++k) result.domain[k] += a.values[k];
    result.min_phi_on_chart_edge = std::min(result.min_phi_on_chart_edge, a.min_edge);
    result.evaluations += a.evaluations;
  }
  return result;
}

}  // namespace

Result integrate(const Immersion& imm, const Region& region, std::size_t domain_values,
                 const DomainIntegrand& domain_integrand, std::size_t boundary_values,
                 const BoundaryIntegrand& boundary_integrand, const Options& options) {
  require(imm.dim >= 2, ErrorCode::InvalidArgument, "quadrature needs at least a two-dimensional chart");
  require(options.level >= 0 && options.level <= 8, ErrorCode::InvalidArgument, "quadrature level out of range");
  require(options.max_depth >= 0 && options.max_depth <= 12, ErrorCode::InvalidArgument,
          "subdivision depth out of range");
  if (imm.dim > 2) return integrate_rays(imm, region, domain_values, domain_integrand, boundary_values, options);
  Engine eng{imm, region, ParamSpace(imm.domain), domain_values, boundary_values, domain_integrand,
             boundary_integrand, options, {}, {}};
  gauss_legendre(options.gauss_points, eng.gl_x, eng.gl_w);

  const int N = 8 << options.level;
  Result result;
  result.domain.assign(domain_values, 0.0);
  result.boundary.assign(boundary_values, 0.0);

  Window w{eng.space.lo, eng.space.hi};
  bool periodic1 = eng.space.periodic[1];
  for (int iter = 0; iter < 8 && region.lipschitz > 0; ++iter) {
    bool empty = false;
    const Window next = fit_window(eng, w, N, periodic1, empty, result.evaluations);
    if (empty) return result;
    const P2 old_span = w.hi - w.lo, new_span = next.hi - next.lo;
    const bool shrinks = new_span[0] < 0.5 * old_span[0] || new_span[1] < 0.5 * old_span[1];
    if (new_span[1] < old_span[1]) periodic1 = false;
    w = next;
    if (!shrinks) break;
  }

  const P2 h = (w.hi - w.lo) / N;
  std::vector<Engine::Acc> cells(static_cast<std::size_t>(N * N));
  parallel_for(cells.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / N, j = static_cast<int>(idx) % N;
    const P2 a(w.lo[0] + i * h[0], w.lo[1] + j * h[1]);
    Engine::Acc& acc = cells[idx];
    acc.values.assign(domain_values + boundary_values, 0.0);
    eng.process(a, a + h, 0, acc);
  });
  for (const auto& acc : cells) {
    for (std::size_t k = 0; k < domain_values; ++k) result.domain[k] += acc.values[k];
    for (std::size_t k = 0; k < boundary_values; ++k) result.boundary[k] += acc.values[domain_values + k];
    result.min_phi_on_chart_edge = std::min(result.min_phi_on_chart_edge, acc.min_edge_phi);
    result.evaluations += acc.evaluations;
  }
  return result;
}

double area(const Immersion& imm, const Region& region, const Options& options) {
  const auto r = integrate(
      imm, region, 1, [](const Vec&, const Jet&, double* out) { out[0] = 1.0; }, 0,
      [](const Vec&, const Jet&, const Vec&, double*) {}, options);
  return r.domain[0];
}

}  // namespace minlap::quadrature
