#include "fixtures.hpp"
#include "minlap/diagnostics.hpp"
#include "minlap/error.hpp"
#include "minlap/surfaces.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace minlap;
using fixtures::vec;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(omega(1) == doctest::Approx(2).epsilon(1e-15));
  CHECK(omega(2) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(omega(3) == doctest::Approx(4 * pi / 3).epsilon(1e-15));
  CHECK(omega(4) == doctest::Approx(pi * pi / 2).epsilon(1e-15));
  for (const auto& row : omega_ratio_check(10)) {
    CAPTURE(row.n);
    CHECK(row.holds);
    CHECK(row.ratio >= row.lower);
  }
}

TEST_CASE("Cheng bound") {
  CHECK(cheng_bound(0.0, 3) == 0.0);
  CHECK(cheng_bound(2.0, 3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(cheng_bound(-1.0, 2), Error);
}

TEST_CASE("plane volume growth: ratio is omega_n") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    const Immersion imm = make_immersion(SurfaceSpec::plane(n, 11.0));
    const auto rep = volume_growth(imm, BasePoint::ambient_point(Vec::Zero(n + 1)), {1, 2, 5, 10});
    for (double r : rep.ratios) CHECK(r == doctest::Approx(omega(n)).epsilon(1e-9));
    CHECK(rep.monotone);
    CHECK(rep.miranda_pass);
    CHECK_FALSE(rep.exceeds_omega);
    CHECK(rep.ends_bound == 1);
  }
}

TEST_CASE("volume growth below a plane offset from the base") {
  // Base at height 1 over the plane: V(r) = π(r² − 1), so the ratio rises toward π.
  // The ball is off the chart centre in ambient space, which the cell quadrature
  // resolves to second order in the leaf size (about 1e-8 relative at level 3).
  const Immersion imm = make_immersion(SurfaceSpec::plane(2, 11.0));
  const auto rep = volume_growth(imm, BasePoint::ambient_point(vec({0, 0, 1})), {2, 5, 10});
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    const double r = rep.radii[i];
    CHECK(rep.volumes[i] == doctest::Approx(pi * (r * r - 1)).epsilon(5e-8));
  }
  CHECK(rep.monotone);
  CHECK(rep.base_convention == "ambient");
}

TEST_CASE("catenoid volume growth approaches two planar ends") {
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(1.0, 5.0));
  const auto rep = volume_growth(imm, BasePoint::ambient_point(vec({0, 0, 0})), {1, 5, 20, 40});
  CHECK(rep.monotone);
  CHECK(rep.ratios.back() / pi >= 1.85);
  CHECK(rep.ratios.back() / pi < 2.0);
  CHECK(rep.exceeds_omega);
  CHECK(rep.ends_bound == 2);
  CHECK(rep.miranda_pass);
}

TEST_CASE("small-radius limit at an embedded point") {
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(1.0, 2.0));
  const auto sr = small_radius_limit(imm, BasePoint::surface_point(imm, vec({0.0, 1.0})), {0.2, 0.1, 0.05});
  CHECK(sr.nonincreasing_toward_one);
  for (double v : sr.values) {
    CHECK(v >= 1.0);
    CHECK(v <= 1.02);
  }
  CHECK_THROWS_AS(small_radius_limit(imm, BasePoint::ambient_point(vec({0, 0, 0})), {0.1}), Error);
}

TEST_CASE("decay bound on the catenoid about the origin: equality only on the neck") {
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(1.0, 4.0));
  CurvatureSampling s;
  s.grid = 121;
  s.shells = {1, 2, 5, 10};
  s.ball_radii = {2, 5};
  const CurvatureAudit a = curvature_audit(imm, BasePoint::ambient_point(vec({0, 0, 0})), s);
  const auto& d = a.decay_bound;
  CHECK(d.kind == DecayBoundVerdict::Kind::PassEqualityOnlyAt);
  CHECK(std::abs(d.sup - 1) <= 1e-6);
  REQUIRE(d.strict_witness.has_value());
  CHECK(d.strict_witness_value < 1);
  CHECK_FALSE(d.equality_points.empty());
  for (const Vec& q : d.equality_points) CHECK(std::abs(q[0]) <= 1e-12);
}

TEST_CASE("decay bound fails for a base on the neck") {
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(1.0, 4.0));
  CurvatureSampling s;
  s.grid = 121;
  s.shells = {1, 2, 5, 10};
  s.ball_radii = {2};
  const CurvatureAudit a = curvature_audit(imm, BasePoint::surface_point(imm, vec({0.0, 0.0})), s);
  CHECK(a.decay_bound.kind == DecayBoundVerdict::Kind::Fail);
  CHECK(a.decay_bound.sup_r_tilde == doctest::Approx(2.0).epsilon(0.05));
  CHECK(a.base_convention == "on_surface");
}

TEST_CASE("graph Hessian bound: linear graph passes, cubic control fails") {
  CurvatureSampling s;
  s.grid = 41;
  s.shells = {1, 2};
  s.ball_radii = {1};
  {
    const SurfaceSpec spec = SurfaceSpec::graph_of(GraphFunctionSpec::linear({0.5, 0.2}, 0.0), 3.0);
    const CurvatureAudit a =
        curvature_audit(make_immersion(spec), BasePoint::ambient_point(vec({0, 0, 0})), s, &*spec.graph);
    REQUIRE(a.graph_hessian_bound.has_value());
    CHECK(a.graph_hessian_bound->pass);
    CHECK(a.decay_bound.sup <= 1e-12);
  }
  {
    const SurfaceSpec spec = SurfaceSpec::graph_of(GraphFunctionSpec::cubic(2), 3.0);
    const CurvatureAudit a =
        curvature_audit(make_immersion(spec), BasePoint::ambient_point(vec({0, 0, 0})), s, &*spec.graph);
    REQUIRE(a.graph_hessian_bound.has_value());
    CHECK_FALSE(a.graph_hessian_bound->pass);
  }
}

TEST_CASE("normal component on spheres about a point above the plane is h/R") {
  const Immersion imm = make_immersion(SurfaceSpec::plane(2, 25.0));
  const double h = 0.5;
  const XiReport x = xi_estimate(imm, BasePoint::ambient_point(vec({0, 0, h})), {2, 5, 10, 20}, 40);
  for (const auto& sh : x.shells) {
    CAPTURE(sh.radius);
    REQUIRE(sh.count > 0);
    CHECK(sh.inf == doctest::Approx(h / sh.radius).epsilon(1e-8));
    CHECK(sh.sup == doctest::Approx(h / sh.radius).epsilon(1e-8));
  }
  const XiReport flat = xi_estimate(imm, BasePoint::ambient_point(vec({0, 0, 0})), {2, 5, 10, 20}, 40);
  CHECK(flat.converged);
  CHECK(flat.limit_estimate <= 1e-12);
}
