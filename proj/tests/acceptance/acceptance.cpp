// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "minlap/bdgg.hpp"
#include "minlap/diagnostics.hpp"
#include "minlap/eigensolve.hpp"
#include "minlap/geometry.hpp"
#include "minlap/meshing.hpp"
#include "minlap/pohozaev.hpp"
#include "minlap/surfaces.hpp"
#include "minlap/weyl.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace minlap;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kJ01Squared = 5.783185962946784;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget;  // seconds, 0 for none
  std::function<void(Outcome&)> body;
};

Vec v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }
Vec v2(double x, double y) { return Eigen::Vector2d(x, y); }

std::vector<SurfaceSpec> curvature_catalog() {
  return {SurfaceSpec::plane(2, 5.0),
          SurfaceSpec::plane(3, 4.0),
          SurfaceSpec::catenoid(1.0, 3.0),
          SurfaceSpec::helicoid(1.0, 3.0, 4.0),
          SurfaceSpec::graph_of(GraphFunctionSpec::linear({0.7, -1.3}, 0.4), 4.0),
          SurfaceSpec::graph_of(GraphFunctionSpec::linear({2.0, 0.5, -0.25}, -1.0), 3.0)};
}

void hessian_trace(Outcome& o) {
  double worst = 0;
  int count = 0;
  for (const SurfaceSpec& spec : curvature_catalog()) {
    const Immersion imm = make_immersion(spec);
    const auto samples = sample_chart(imm.domain, 850, 101);
    for (const BasePoint& base : {BasePoint::ambient_point(Vec::Zero(spec.n + 1)), BasePoint::surface_point(imm, sample_chart(imm.domain, 1, 999, 0.5).front())}) {
      for (const Vec& q : samples) {
        worst = std::max(worst, std::abs(extrinsic_calculus(imm, base, q).hess_h.trace() - spec.n));
        ++count;
      }
    }
  }
  o.detail << count << " samples, max |tr Hess h - n| = " << worst;
  o.expect(count >= 10000, "at least 1e4 samples");
  o.expect(worst <= 1e-8, "tolerance 1e-8");
}

void distance_identities(Outcome& o) {
  double worst_split = 0, worst_bound = 0;
  for (const SurfaceSpec& spec : curvature_catalog()) {
    const Immersion imm = make_immersion(spec);
    const auto samples = sample_chart(imm.domain, 500, 202);
    for (const BasePoint& base : {BasePoint::ambient_point(Vec::Zero(spec.n + 1)), BasePoint::surface_point(imm, sample_chart(imm.domain, 1, 999, 0.5).front())}) {
      for (const Vec& q : samples) {
        const ExtrinsicCalc ec = extrinsic_calculus(imm, base, q);
        if (ec.r_tilde <= 1e-6) continue;
        worst_split = std::max(worst_split, std::abs(1 - ec.grad_norm * ec.grad_norm -
                                                     ec.normal_component * ec.normal_component));
        const double lo = (spec.n - 1) / ec.r_tilde, hi = spec.n / ec.r_tilde;
        worst_bound = std::max({worst_bound, (lo - ec.laplacian_r) * ec.r_tilde, (ec.laplacian_r - hi) * ec.r_tilde});
      }
    }
  }
  double plane_gap = 0;
  const Immersion plane = make_immersion(SurfaceSpec::plane(2, 5.0));
  for (const Vec& q : sample_chart(plane.domain, 500, 3)) {
    const ExtrinsicCalc ec = extrinsic_calculus(plane, BasePoint::ambient_point(v3(0, 0, 0)), q);
    if (ec.r_tilde > 1e-6) plane_gap = std::max(plane_gap, std::abs(ec.laplacian_r - 1 / ec.r_tilde));
  }
  o.detail << "split error " << worst_split << ", bound excess " << worst_bound << ", plane lower-bound gap "
           << plane_gap;
  o.expect(worst_split <= 1e-10, "1 - |grad r|^2 = dr(nu)^2");
  o.expect(worst_bound <= 1e-10, "(n-1)/r <= Lap r <= n/r");
  o.expect(plane_gap <= 1e-10, "plane attains the lower bound");
}

void volume_monotonicity(Outcome& o) {
  const std::vector<double> radii{0.5, 1, 2, 5, 10, 20, 40};
  const Immersion plane = make_immersion(SurfaceSpec::plane(2, 43.0));
  const Immersion cat = make_immersion(SurfaceSpec::catenoid(1.0, 5.0));
  const auto p = volume_growth(plane, BasePoint::ambient_point(v3(0, 0, 0)), radii);
  const auto c = volume_growth(cat, BasePoint::ambient_point(v3(0, 0, 0)), radii);
  o.expect(p.monotone, "plane monotone");
  o.expect(c.monotone, "catenoid monotone");
  bool small_ok = true;
  for (const auto& [imm, q] : {std::pair{cat, v2(0.0, 1.0)}, {cat, v2(1.2, 4.0)}, {plane, v2(0.3, -0.2)}}) {
    const auto sr = small_radius_limit(imm, BasePoint::surface_point(imm, q), {0.2, 0.1, 0.05});
    small_ok = small_ok && sr.nonincreasing_toward_one;
    // The plane sits at exactly 1, so the lower end allows quadrature error.
    for (double v : sr.values) small_ok = small_ok && v >= 1 - 1e-6 && v <= 1.02;
    o.detail << "small-radius " << sr.values.front() << " -> " << sr.values.back() << "; ";
  }
  o.detail << "catenoid ratios " << c.ratios.front() << " .. " << c.ratios.back();
  o.expect(small_ok, "small-radius limit in [1, 1.02] and decreasing");
}

void catenoid_ends(Outcome& o) {
  const Immersion cat = make_immersion(SurfaceSpec::catenoid(1.0, 5.0));
  const auto c = volume_growth(cat, BasePoint::ambient_point(v3(0, 0, 0)), {1, 5, 10, 20, 40});
  const double at40 = c.ratios.back() / pi;
  const Immersion plane = make_immersion(SurfaceSpec::plane(2, 43.0));
  const auto p = volume_growth(plane, BasePoint::ambient_point(v3(0, 0, 0)), {1, 5, 10, 20, 40});
  double plane_dev = 0;
  for (double r : p.ratios) plane_dev = std::max(plane_dev, std::abs(r - pi));
  o.detail << "V/(pi r^2) at r=40: " << at40 << ", ends bound " << c.ends_bound << ", plane max |ratio - pi| "
           << plane_dev;
  o.expect(at40 >= 1.85, "ratio >= 1.85");
  o.expect(c.monotone, "monotone");
  o.expect(c.exceeds_omega, "ratio exceeds omega_2");
  o.expect(plane_dev <= 1e-4, "plane ratio pi +- 1e-4");
}

void miranda(Outcome& o) {
  struct Case {
    SurfaceSpec spec;
    std::vector<double> radii;
  };
  const std::vector<Case> cases{
      {SurfaceSpec::plane(2, 43.0), {1, 5, 10, 20, 40}},
      {SurfaceSpec::graph_of(GraphFunctionSpec::linear({0.7, -1.3}, 0.4), 43.0), {1, 5, 10, 20, 40}},
      {SurfaceSpec::graph_of(GraphFunctionSpec::linear({3.0, 0.0}, 0.0), 43.0), {1, 5, 10}},
      {SurfaceSpec::graph_of(GraphFunctionSpec::scherk(), 1.5), {0.25, 0.5, 1.0, 1.4}}};
  double worst = 0;
  for (const auto& c : cases) {
    const auto rep = volume_growth(make_immersion(c.spec), BasePoint::ambient_point(v3(0, 0, 0)), c.radii);
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
      worst = std::max(worst, rep.volumes[i] / (6 * pi * rep.radii[i] * rep.radii[i]));
    o.expect(rep.miranda_pass, c.spec.graph ? c.spec.graph->label : "plane");
  }
  o.detail << "max V / (6 pi r^2) = " << worst;
  o.expect(worst <= 1, "V <= 6 pi r^2");
}

void fem_sanity(Outcome& o) {
  const Immersion disk = make_immersion(SurfaceSpec::plane(2, 1.0));
  double prev = INFINITY, last = 0;
  std::size_t vertices = 0;
  bool decreasing = true;
  for (int res : {18, 36, 72}) {
    const TriMesh mesh = triangulate(disk, res);
    last = smallest_eigenpairs(dirichlet_reduce(assemble(mesh)), 1).eigenvalues[0];
    decreasing = decreasing && last < prev;
    prev = last;
    vertices = mesh.vertex_count();
  }
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  double oracle = 0;
  for (int trial = 0; trial < 3; ++trial) {
    Mat a(50, 50), b(50, 50);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) {
        a(i, j) = g(rng);
        b(i, j) = g(rng);
      }
    const Mat K = a * a.transpose() / 50 + 0.05 * Mat::Identity(50, 50);
    const Mat M = b * b.transpose() / 50 + 0.5 * Mat::Identity(50, 50);
    const EigenResult d = dense_eigenpairs(K, M, 4);
    EigenOptions opt;
    opt.tol = 1e-12;
    const EigenResult it = smallest_eigenpairs(K.sparseView(), M.sparseView(), 4, opt);
    for (int i = 0; i < 4; ++i) oracle = std::max(oracle, std::abs(it.eigenvalues[i] - d.eigenvalues[i]) / d.eigenvalues[i]);
  }
  const double rel = std::abs(last - kJ01Squared) / kJ01Squared;
  o.detail << "lambda_1 = " << last << " at " << vertices << " vertices (rel. error " << rel
           << "), dense-oracle rel. gap " << oracle;
  o.expect(vertices >= 9000, "about 1e4 vertices");
  o.expect(rel <= 0.01, "within 1% of j01^2");
  o.expect(decreasing, "decreasing under refinement");
  o.expect(oracle <= 1e-8, "dense oracle 1e-8");
}

void catenoid_spectrum(Outcome& o) {
  const Immersion cat = make_immersion(SurfaceSpec::catenoid(1.0, std::acosh(41.0) + 0.5));
  const Lambda1Curve c = lambda1_curve(cat, BasePoint::ambient_point(v3(0, 0, 0)), {5, 10, 20, 40}, 32);
  double worst = 0;
  for (const auto& p : c.points) {
    worst = std::max(worst, p.lambda1 * p.r * p.r);
    o.detail << "r=" << p.r << ": " << p.lambda1 * p.r * p.r << "; ";
  }
  o.expect(c.strictly_decreasing, "strictly decreasing");
  o.expect(worst <= 1.05 * kJ01Squared, "lambda_1 r^2 <= 1.05 j01^2");
}

void weyl(Outcome& o) {
  const WeylSchedule s = build_schedule(2, pi, pi, 2.0, 6, 1.0);
  const auto& last = s.rows.back();
  const Immersion plane = make_immersion(SurfaceSpec::plane(2, 1.05 * last.d / last.eps + 1));
  const WeylReport rep = weyl_run(plane, BasePoint::ambient_point(v3(0, 0, 0)), s, 0.0);
  bool t11 = true, t12 = true;
  double min_mass = INFINITY;
  for (const auto& r : rep.rows) {
    t11 = t11 && r.T11 <= r.B14;
    t12 = t12 && r.T12 <= r.B15;
    min_mass = std::min(min_mass, r.mass);
  }
  const double drop = rep.rows.front().residual_ratio / rep.rows.back().residual_ratio;
  o.detail << "tau = " << s.tau << ", min mass " << min_mass << ", ratio drop " << drop;
  o.expect(std::abs(s.tau - 3.0 / 16) <= 1e-15, "tau = 3/16");
  o.expect(min_mass >= s.tau - 1e-2, "mass >= tau - 1e-2");
  o.expect(t11, "T11 <= B14");
  o.expect(t12, "T12 <= B15");
  o.expect(drop >= 4, "ratio drop >= 4");
}

void pohozaev(Outcome& o) {
  const Immersion disk = make_immersion(SurfaceSpec::plane(2, 1.0));
  const BasePoint origin = BasePoint::ambient_point(v3(0, 0, 0));
  const double c = 1.3, lambda = 2.0;
  const auto k = identity_residual(disk, IdentityDomain::chart(), AmbientField::constant(c, 3), origin, lambda);
  const double target = -2 * pi * lambda * c * c;
  const auto y = identity_residual(disk, IdentityDomain::chart(), AmbientField::coordinate(0, 3), origin, 0.0);
  const Immersion cat = make_immersion(SurfaceSpec::catenoid(1.0, 4.0));
  const auto conv = identity_convergence(cat, IdentityDomain::ball(3.0), AmbientField::gaussian(v3(0.5, 0.3, 0.2), 1.2),
                                         origin, 1.0, {1, 2, 3});
  o.detail << "constant: lhs " << k.lhs << ", rhs " << k.rhs << " (target " << target << "); coordinate residual "
           << y.residual << "; catenoid order " << conv.min_order;
  o.expect(std::abs(k.lhs - target) <= 1e-10 * std::abs(target) && std::abs(k.rhs - target) <= 1e-10 * std::abs(target),
           "constant case");
  o.expect(y.residual <= 1e-8, "coordinate case");
  o.expect(conv.min_order >= 2, "order >= 2");
}

void decay_audit(Outcome& o) {
  const Immersion cat = make_immersion(SurfaceSpec::catenoid(1.0, 4.0));
  CurvatureSampling s;
  s.grid = 241;
  s.shells = {1, 2, 5, 10, 20};
  s.ball_radii = {2};
  const CurvatureAudit a = curvature_audit(cat, BasePoint::ambient_point(v3(0, 0, 0)), s);
  const auto& d = a.decay_bound;
  bool neck_only = !d.equality_points.empty();
  for (const Vec& q : d.equality_points) neck_only = neck_only && std::abs(q[0]) <= 1e-12;
  const CurvatureAudit n = curvature_audit(cat, BasePoint::surface_point(cat, v2(0, 0)), s);
  o.detail << "sup " << d.sup << " (" << d.label() << ", " << d.equality_points.size()
           << " equality samples); neck base: " << n.decay_bound.label() << " at r = " << n.decay_bound.sup_r_tilde;
  o.expect(std::abs(d.sup - 1) <= 1e-6, "sup = 1");
  o.expect(d.kind == DecayBoundVerdict::Kind::PassEqualityOnlyAt && neck_only, "equality only at t = 0");
  o.expect(d.strict_witness.has_value(), "strictness witness");
  o.expect(n.decay_bound.kind == DecayBoundVerdict::Kind::Fail, "neck base fails");
  o.expect(std::abs(n.decay_bound.sup_r_tilde - 2) <= 0.1, "failure near r = 2");
}

void rescaling(Outcome& o) {
  const Immersion cat = make_immersion(SurfaceSpec::catenoid(1.0, 2.0));
  const Vec base = smallest_eigenpairs(dirichlet_reduce(assemble(triangulate(cat, 16))), 4).eigenvalues;
  double worst = 0;
  for (double c : {0.5, 2.0, 10.0}) {
    const Vec ev = smallest_eigenpairs(dirichlet_reduce(assemble(triangulate(scaled(cat, c), 16))), 4).eigenvalues;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(ev[i] * c * c - base[i]) / base[i]);
  }
  o.detail << "max relative deviation " << worst;
  o.expect(worst <= 1e-10, "c^-2 scaling");
}

void bdgg_checks(Outcome& o) {
  const bdgg::Params p = bdgg::params(4);
  o.expect(p.valid && p.p == 3 && p.delta == 1 && p.alpha == 1.5 && p.lambda_lo == 1.3125 && p.lambda_hi == 4.0 / 3.0,
           "params(4)");
  bool profile = true;
  for (int i = 0; i <= 20; ++i) {
    const double z = 0.25 * i;
    const double v = bdgg::P(z, p);
    profile = profile && v >= z && bdgg::P(-z, p) == -v;
  }
  o.expect(profile, "P(z) >= z and odd");
  bool axis = true;
  for (double u : {0.5, 1.0, 2.0, 5.0, 10.0}) axis = axis && bdgg::f1_uv(u, 0, p) / std::pow(u, 2 * p.alpha) == 1.0;
  o.expect(axis, "f1 / |x|^(2 alpha) = 1 on the u-axis");
  const auto s = bdgg::solve_reduced_mse(p, 5.0, 40);
  o.detail << "Newton " << s.newton_iterations << " steps, residual " << s.residual_norm << ", antisymmetry "
           << s.antisymmetry << ", diagonal " << s.diagonal_max;
  o.expect(s.residual_norm <= 1e-10 * std::max(1.0, s.initial_residual), "converged");
  o.expect(s.antisymmetry <= 1e-8 && s.diagonal_max <= 1e-8, "antisymmetry and diagonal");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "trace of Hess h = n on minimal surfaces", 5, hessian_trace},
      {2, "extrinsic distance identities", 0, distance_identities},
      {3, "volume monotonicity and small-radius limit", 60, volume_monotonicity},
      {4, "catenoid ends and plane ratio", 0, catenoid_ends},
      {5, "graph volume bound V <= 6 pi r^2", 0, miranda},
      {6, "FEM spectrum sanity", 30, fem_sanity},
      {7, "catenoid lambda_1 signature", 0, catenoid_spectrum},
      {8, "Weyl certification on the plane", 120, weyl},
      {9, "integral identity", 0, pohozaev},
      {10, "curvature decay audit on the catenoid", 0, decay_audit},
      {11, "rescaling invariance of the discrete spectrum", 0, rescaling},
      {12, "BdGG barriers and reduced solve", 120, bdgg_checks},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && secs > c.budget) {
      o.pass = false;
      o.detail << " [over the " << c.budget << " s budget]";
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
