#include "minlap/bdgg.hpp"

#include "minlap/error.hpp"
#include "minlap/parallel.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace minlap::bdgg {

Params params(int m, double lambda, double B, double D) {
  require(m >= 2, ErrorCode::InvalidArgument, "m must be at least 2");
  Params prm;
  prm.m = m;
  prm.p = m - 1;
  const double p = prm.p;
  prm.delta = 4 * p * p - 12 * p + 1;
  prm.B = B;
  prm.D = D;
  if (prm.delta < 0) return prm;
  prm.alpha = (2 * p + 1 - std::sqrt(prm.delta)) / 4;
  prm.lambda_lo = prm.alpha * (2 * p + 1) / (2 * p + 2);
  prm.lambda_hi = std::min(prm.alpha, p / (prm.alpha * prm.alpha));
  prm.valid = m >= 4 && prm.lambda_lo < prm.lambda_hi && prm.alpha > 1;
  prm.lambda = lambda > 0 ? lambda : 0.5 * (prm.lambda_lo + prm.lambda_hi);
  if (prm.valid && !(prm.lambda > prm.lambda_lo && prm.lambda < prm.lambda_hi)) prm.valid = false;
  return prm;
}

namespace {

void check(const Params& prm) {
  if (!prm.valid) fail(ErrorCode::InvalidParams, "barrier parameters are not admissible for m = " + std::to_string(prm.m));
}

std::pair<double, double> block_radii(const std::vector<double>& x, const Params& prm) {
  require(x.size() == static_cast<std::size_t>(2 * prm.m), ErrorCode::InvalidArgument, "point must lie in R^{2m}");
  double u = 0, v = 0;
  for (int i = 0; i < prm.m; ++i) {
    u += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    v += x[static_cast<std::size_t>(i + prm.m)] * x[static_cast<std::size_t>(i + prm.m)];
  }
  return {std::sqrt(u), std::sqrt(v)};
}

constexpr double inner_tol = 1e-10;
constexpr double outer_rel_tol = 1e-8;

template <class F>
double adaptive(F f, double a, double b, double tol, bool relative) {
  if (a == b) return 0;
  double err = 0;
  // Boost's relative stopping tolerance; asking for less than ~1e-12 only
  // subdivides into round-off and inflates the error estimate.
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-12, &err);
  const double allowed = relative ? tol * std::abs(v) : tol;
  if (!(err <= allowed) || !std::isfinite(v)) fail(ErrorCode::QuadratureFailure, "adaptive quadrature missed its tolerance");
  return v;
}

/// ∫_Y^∞ dy / (1 + y^{2α}); the inner integral after t = y^{1/(λ−1)}.
double tail(double Y, double alpha) {
  const double k = 2 * alpha;
  // y = 1/x on [max(Y,1), ∞)
  const auto flipped = [k](double x) { return x <= 0 ? 0.0 : std::pow(x, k - 2) / (std::pow(x, k) + 1); };
  if (Y >= 1) return adaptive(flipped, 0.0, 1 / Y, inner_tol, false);
  const auto direct = [k](double y) { return 1 / (1 + std::pow(y, k)); };
  return adaptive(direct, Y, 1.0, inner_tol / 2, false) + adaptive(flipped, 0.0, 1.0, inner_tol / 2, false);
}

}  // namespace

double f1_uv(double u, double v, const Params& prm) {
  check(prm);
  const double rho2 = u * u + v * v;
  if (rho2 == 0) return 0;
  return (u * u - v * v) * std::pow(rho2, prm.alpha - 1);
}

double f1(const std::vector<double>& x, const Params& prm) {
  const auto [u, v] = block_radii(x, prm);
  return f1_uv(u, v, prm);
}

double inner_integral(double w, const Params& prm) {
  check(prm);
  require(w >= 0, ErrorCode::InvalidArgument, "inner integral needs w >= 0");
  const double s = prm.lambda - 1;
  return tail(std::pow(w, s), prm.alpha) / s;
}

double inner_integral_at_zero(const Params& prm) {
  check(prm);
  const double s = prm.lambda - 1, b = 2 * prm.alpha * s;
  return std::numbers::pi / b / std::sin(std::numbers::pi * s / b);
}

double P(double z, const Params& prm) {
  check(prm);
  if (z == 0) return 0;
  const double s = prm.lambda - 1, B = prm.B, alpha = prm.alpha;
  // w = x^{1/s} removes the cusp of the inner integral at w = 0.
  const auto integrand = [&](double x) {
    if (x <= 0) return 0.0;
    return std::exp(B * tail(x, alpha) / s) * std::pow(x, 1 / s - 1) / s;
  };
  const double value = adaptive(integrand, 0.0, std::pow(std::abs(z), s), outer_rel_tol, true);
  return z > 0 ? value : -value;
}

double f2_uv(double u, double v, const Params& prm) {
  check(prm);
  const double a = u * u - v * v, rho2 = u * u + v * v;
  if (rho2 == 0) return 0;
  const double arg = a + f1_uv(u, v, prm) * (1 + prm.D * std::pow(std::abs(a / rho2), prm.lambda - 1));
  return P(arg, prm);
}

double f2(const std::vector<double>& x, const Params& prm) {
  const auto [u, v] = block_radii(x, prm);
  return f2_uv(u, v, prm);
}

QuarterDisk quarter_disk(double R, int rings) {
  require(R > 0, ErrorCode::InvalidArgument, "radius must be positive");
  require(rings >= 2, ErrorCode::InvalidArgument, "need at least two rings");
  QuarterDisk q;
  q.R = R;
  q.rings = rings;
  // Ring i holds 2i + 1 vertices at angles (π/2) j / (2i); vertex (i, j) has index i² + j.
  const auto index = [](int i, int j) { return i * i + j; };
  for (int i = 0; i <= rings; ++i) {
    const double rho = R * i / rings;
    for (int j = 0; j <= 2 * i; ++j) {
      const double th = i == 0 ? 0.0 : std::numbers::pi / 2 * j / (2 * i);
      double u = rho * std::cos(th), v = rho * std::sin(th);
      if (2 * j == 2 * i) u = v = rho * std::sqrt(0.5);
      if (j == 2 * i && i > 0) u = 0, v = rho;
      q.points.push_back({u, v});
      q.mirror.push_back(index(i, 2 * i - j));
      q.on_arc.push_back(i == rings);
    }
  }
  // Mirror the angles exactly: the vertex (i, 2i - j) gets the swapped coordinates of (i, j).
  for (int i = 1; i <= rings; ++i)
    for (int j = i + 1; j <= 2 * i; ++j) {
      const auto& src = q.points[static_cast<std::size_t>(index(i, 2 * i - j))];
      q.points[static_cast<std::size_t>(index(i, j))] = {src[1], src[0]};
    }
  // Stitch the wedge 0 ≤ θ ≤ π/4 and reflect it.
  for (int i = 0; i < rings; ++i) {
    int a = 0, b = 0;
    while (a < i || b < i + 1) {
      std::array<int, 3> t;
      const bool inner = a < i && (b >= i + 1 || (a + 1) * (i + 1) <= (b + 1) * i);
      if (inner) {
        t = {index(i, a), index(i + 1, b), index(i, a + 1)};
        ++a;
      } else {
        t = {index(i, a), index(i + 1, b), index(i + 1, b + 1)};
        ++b;
      }
      q.triangles.push_back(t);
    }
  }
  const std::size_t half = q.triangles.size();
  for (std::size_t k = 0; k < half; ++k) {
    const auto t = q.triangles[k];
    q.triangles.push_back({q.mirror[static_cast<std::size_t>(t[0])], q.mirror[static_cast<std::size_t>(t[2])],
                           q.mirror[static_cast<std::size_t>(t[1])]});
  }
  return q;
}

namespace {

struct Element {
  double area = 0, weight = 0;
  std::array<std::array<double, 2>, 3> grad{};  // ∇φ_k
};

/// Seven-point degree-five rule on the reference triangle (barycentric, weight).
constexpr std::array<std::array<double, 4>, 7> kRule = {{
    {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
    {0.0597158717897698, 0.4701420641051151, 0.4701420641051151, 0.1323941527885062},
    {0.4701420641051151, 0.0597158717897698, 0.4701420641051151, 0.1323941527885062},
    {0.4701420641051151, 0.4701420641051151, 0.0597158717897698, 0.1323941527885062},
    {0.7974269853530873, 0.1012865073234563, 0.1012865073234563, 0.1259391805448271},
    {0.1012865073234563, 0.7974269853530873, 0.1012865073234563, 0.1259391805448271},
    {0.1012865073234563, 0.1012865073234563, 0.7974269853530873, 0.1259391805448271},
}};

std::vector<Element> elements(const QuarterDisk& mesh, int m) {
  std::vector<Element> out(mesh.triangles.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& t = mesh.triangles[k];
    const auto& p0 = mesh.points[static_cast<std::size_t>(t[0])];
    const auto& p1 = mesh.points[static_cast<std::size_t>(t[1])];
    const auto& p2 = mesh.points[static_cast<std::size_t>(t[2])];
    const double twice = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if (!(twice > 0)) fail(ErrorCode::DegenerateTriangle, "quarter-disk triangle is degenerate");
    Element& e = out[k];
    e.area = twice / 2;
    const std::array<const std::array<double, 2>*, 3> P = {&p0, &p1, &p2};
    for (int c = 0; c < 3; ++c) {
      const auto& a = *P[static_cast<std::size_t>((c + 1) % 3)];
      const auto& b = *P[static_cast<std::size_t>((c + 2) % 3)];
      e.grad[static_cast<std::size_t>(c)] = {(a[1] - b[1]) / twice, (b[0] - a[0]) / twice};
    }
    for (const auto& r : kRule) {
      const double u = r[0] * p0[0] + r[1] * p1[0] + r[2] * p2[0];
      const double v = r[0] * p0[1] + r[1] * p1[1] + r[2] * p2[1];
      e.weight += r[3] * std::pow(u * v, m - 1);
    }
    e.weight *= e.area;
  }
  return out;
}

std::array<double, 2> element_gradient(const QuarterDisk& mesh, const Element& e, std::size_t k,
                                       const std::vector<double>& f) {
  std::array<double, 2> G{0, 0};
  for (int c = 0; c < 3; ++c) {
    const double fc = f[static_cast<std::size_t>(mesh.triangles[k][static_cast<std::size_t>(c)])];
    G[0] += fc * e.grad[static_cast<std::size_t>(c)][0];
    G[1] += fc * e.grad[static_cast<std::size_t>(c)][1];
  }
  return G;
}

void symmetry_stats(ReducedSolution& s) {
  s.antisymmetry = 0;
  s.diagonal_max = 0;
  for (std::size_t i = 0; i < s.f.size(); ++i) {
    const auto j = static_cast<std::size_t>(s.mesh.mirror[i]);
    s.antisymmetry = std::max(s.antisymmetry, std::abs(s.f[i] + s.f[j]));
    if (i == j) s.diagonal_max = std::max(s.diagonal_max, std::abs(s.f[i]));
  }
}

}  // namespace

ReducedSolution solve_reduced_mse(const Params& prm, double R, int rings, double tol, int max_iterations) {
  check(prm);
  ReducedSolution sol;
  sol.m = prm.m;
  sol.mesh = quarter_disk(R, rings);
  const QuarterDisk& mesh = sol.mesh;
  const std::size_t N = mesh.points.size();
  const auto elems = elements(mesh, prm.m);

  std::vector<int> free_index(N, -1);
  int nfree = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (!mesh.on_arc[i]) free_index[i] = nfree++;
  sol.f.resize(N);
  for (std::size_t i = 0; i < N; ++i) sol.f[i] = f1_uv(mesh.points[i][0], mesh.points[i][1], prm);

  const auto residual = [&](const std::vector<double>& f, Eigen::VectorXd& r, std::vector<Eigen::Triplet<double>>* trip) {
    r.setZero(nfree);
    for (std::size_t k = 0; k < elems.size(); ++k) {
      const Element& e = elems[k];
      const auto G = element_gradient(mesh, e, k, f);
      const double s = std::sqrt(1 + G[0] * G[0] + G[1] * G[1]);
      std::array<double, 3> dG{};
      for (std::size_t c = 0; c < 3; ++c) dG[c] = e.grad[c][0] * G[0] + e.grad[c][1] * G[1];
      for (std::size_t c = 0; c < 3; ++c) {
        const int ic = free_index[static_cast<std::size_t>(mesh.triangles[k][c])];
        if (ic < 0) continue;
        r[ic] += e.weight * dG[c] / s;
        if (!trip) continue;
        for (std::size_t d = 0; d < 3; ++d) {
          const int id = free_index[static_cast<std::size_t>(mesh.triangles[k][d])];
          if (id < 0) continue;
          const double gg = e.grad[c][0] * e.grad[d][0] + e.grad[c][1] * e.grad[d][1];
          trip->emplace_back(ic, id, e.weight * (gg / s - dG[c] * dG[d] / (s * s * s)));
        }
      }
    }
  };

  Eigen::VectorXd r;
  std::vector<Eigen::Triplet<double>> trip;
  residual(sol.f, r, &trip);
  double norm = r.norm();
  sol.initial_residual = norm;
  const double target = tol * std::max(1.0, sol.initial_residual);
  int it = 0;
  for (; it < max_iterations && norm > target; ++it) {
    Eigen::SparseMatrix<double> H(nfree, nfree);
    H.setFromTriplets(trip.begin(), trip.end());
    // Jacobi scaling; the weight (uv)^{m−1} spans many decades across the disk.
    Eigen::VectorXd scale = H.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::SparseMatrix<double> Hs = scale.asDiagonal() * H * scale.asDiagonal();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Hs);
    if (solver.info() != Eigen::Success) fail(ErrorCode::NewtonDiverged, "Newton matrix factorization failed");
    const Eigen::VectorXd step = scale.asDiagonal() * solver.solve(-(scale.asDiagonal() * r));
    double t = 1;
    bool accepted = false;
    std::vector<double> trial(N);
    Eigen::VectorXd r_trial;
    for (int halvings = 0; halvings < 40; ++halvings, t /= 2) {
      trial = sol.f;
      for (std::size_t i = 0; i < N; ++i)
        if (free_index[i] >= 0) trial[i] += t * step[free_index[i]];
      residual(trial, r_trial, nullptr);
      if (r_trial.norm() < norm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // A full step that cannot reduce the residual any more means round-off has been reached.
      if (step.lpNorm<Eigen::Infinity>() <= 1e-13 * (1 + r.lpNorm<Eigen::Infinity>())) break;
      fail(ErrorCode::NewtonDiverged, "line search exhausted");
    }
    sol.f = trial;
    trip.clear();
    residual(sol.f, r, &trip);
    norm = r.norm();
  }
  if (norm > target && it >= max_iterations) fail(ErrorCode::NewtonDiverged, "Newton iteration limit reached");
  sol.residual_norm = norm;
  sol.newton_iterations = it;
  symmetry_stats(sol);
  return sol;
}

ReducedSolution sample_function(const std::function<double(double, double)>& f, double R, int rings, int m) {
  ReducedSolution sol;
  sol.m = m;
  sol.mesh = quarter_disk(R, rings);
  sol.boundary_data = "sampled";
  for (const auto& p : sol.mesh.points) sol.f.push_back(f(p[0], p[1]));
  symmetry_stats(sol);
  return sol;
}

BarrierReport barrier_ordering(const ReducedSolution& sol, const Params& prm, int stride) {
  check(prm);
  require(stride >= 1, ErrorCode::InvalidArgument, "stride must be positive");
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < sol.f.size(); i += static_cast<std::size_t>(stride))
    if (!sol.mesh.on_arc[i]) nodes.push_back(i);
  BarrierReport rep;
  rep.rows.resize(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) {
    const auto& p = sol.mesh.points[nodes[k]];
    rep.rows[k] = {p[0], p[1], f1_uv(p[0], p[1], prm), sol.f[nodes[k]], f2_uv(p[0], p[1], prm)};
  });
  rep.samples = static_cast<int>(rep.rows.size());
  for (const auto& row : rep.rows) {
    const double lower = std::abs(row.f1) - std::abs(row.f), upper = std::abs(row.f) - std::abs(row.f2);
    rep.worst_lower = std::max(rep.worst_lower, lower);
    rep.worst_upper = std::max(rep.worst_upper, upper);
    rep.lower_violations += lower > 1e-3;
    rep.upper_violations += upper > 1e-3;
  }
  return rep;
}

std::vector<GradientRow> gradient_estimate(const ReducedSolution& sol, const Params& prm,
                                           const std::vector<double>& h_values) {
  check(prm);
  const auto elems = elements(sol.mesh, sol.m);
  std::vector<GradientRow> rows;
  for (double h : h_values) {
    require(h > 0 && 2 * h <= sol.mesh.R * (1 + 1e-12), ErrorCode::InvalidArgument, "need 0 < 2h <= R");
    GradientRow row;
    row.h = h;
    for (std::size_t k = 0; k < elems.size(); ++k) {
      double cu = 0, cv = 0;
      for (int c : sol.mesh.triangles[k]) {
        cu += sol.mesh.points[static_cast<std::size_t>(c)][0] / 3;
        cv += sol.mesh.points[static_cast<std::size_t>(c)][1] / 3;
      }
      if (std::hypot(cu, cv) > h) continue;
      const auto G = element_gradient(sol.mesh, elems[k], k, sol.f);
      row.max_grad = std::max(row.max_grad, std::hypot(G[0], G[1]));
    }
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < sol.mesh.points.size(); ++i)
      if (std::hypot(sol.mesh.points[i][0], sol.mesh.points[i][1]) <= 2 * h * (1 + 1e-12)) inside.push_back(i);
    std::vector<double> vals(inside.size());
    parallel_for(inside.size(), [&](std::size_t k) {
      const auto& p = sol.mesh.points[inside[k]];
      vals[k] = std::abs(f2_uv(p[0], p[1], prm));
    });
    for (double v : vals) row.f2_argument = std::max(row.f2_argument, v);
    row.f2_argument /= 2 * h;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ProbeShell> normal_alignment_probe(const ReducedSolution& sol, const std::vector<double>& shell_edges) {
  require(shell_edges.size() >= 2, ErrorCode::InvalidArgument, "need at least one shell");
  const auto elems = elements(sol.mesh, sol.m);
  std::vector<ProbeShell> shells(shell_edges.size() - 1);
  for (std::size_t s = 0; s < shells.size(); ++s) {
    shells[s].r_lo = shell_edges[s];
    shells[s].r_hi = shell_edges[s + 1];
  }
  for (std::size_t k = 0; k < elems.size(); ++k) {
    double u = 0, v = 0, f = 0;
    for (int c : sol.mesh.triangles[k]) {
      u += sol.mesh.points[static_cast<std::size_t>(c)][0] / 3;
      v += sol.mesh.points[static_cast<std::size_t>(c)][1] / 3;
      f += sol.f[static_cast<std::size_t>(c)] / 3;
    }
    const auto G = element_gradient(sol.mesh, elems[k], k, sol.f);
    const double r = std::sqrt(u * u + v * v + f * f);
    if (r <= 0) continue;
    const double xi = std::abs(f - u * G[0] - v * G[1]) / (r * std::sqrt(1 + G[0] * G[0] + G[1] * G[1]));
    for (auto& sh : shells) {
      if (r < sh.r_lo || r >= sh.r_hi) continue;
      sh.xi_min = sh.count == 0 ? xi : std::min(sh.xi_min, xi);
      sh.xi_max = sh.count == 0 ? xi : std::max(sh.xi_max, xi);
      ++sh.count;
    }
  }
  return shells;
}

}  // namespace minlap::bdgg
