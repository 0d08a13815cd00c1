#include "fixtures.hpp"
#include "minlap/error.hpp"
#include "minlap/surfaces.hpp"

#include <doctest.h>

#include <cmath>

using namespace minlap;
using fixtures::vec;

TEST_CASE("catalog surfaces are minimal on random samples") {
  for (const auto& [name, spec] : fixtures::minimal_catalog()) {
    CAPTURE(name);
    CHECK(spec.minimal());
    const Immersion imm = make_immersion(spec);
    CHECK(minimality_residual(spec, sample_chart(imm.domain, 1000, 42)) <= 1e-8);
  }
}

TEST_CASE("non-minimal graphs are flagged and fail the minimality check") {
  for (const auto& g : {GraphFunctionSpec::paraboloid(2), GraphFunctionSpec::square(2), GraphFunctionSpec::cubic(2)}) {
    CAPTURE(g.label);
    const SurfaceSpec spec = SurfaceSpec::graph_of(g, 2.0);
    CHECK_FALSE(spec.minimal());
    const Immersion imm = make_immersion(spec);
    CHECK(minimality_residual(spec, sample_chart(imm.domain, 200, 1)) > 1e-3);
  }
}

TEST_CASE("mean curvature operator of the parabolic graph") {
  // f = q₁²/2: div(Df/W) = (1 + q₁²)^{-3/2}.
  const GraphFunctionSpec g = GraphFunctionSpec::paraboloid(2);
  CHECK(graph_mean_curvature_operator(g, vec({0, 0.3})) == doctest::Approx(1).epsilon(1e-15));
  CHECK(graph_mean_curvature_operator(g, vec({2, 0})) == doctest::Approx(std::pow(5.0, -1.5)).epsilon(1e-14));
}

TEST_CASE("graph volume density is sqrt(1 + |Df|^2)") {
  for (const auto& g : {GraphFunctionSpec::linear({0.7, -1.3}, 0.4), GraphFunctionSpec::scherk(),
                        GraphFunctionSpec::cubic(2), GraphFunctionSpec::linear({0.5, 0.25, -2.0}, 0.0)}) {
    CAPTURE(g.label);
    const Immersion imm = make_immersion(SurfaceSpec::graph_of(g, 1.2));
    for (const Vec& q : sample_chart(imm.domain, 200, 8)) {
      const Jet jet = imm.jet(q);
      const double density = std::sqrt((jet.first.transpose() * jet.first).determinant());
      CHECK(std::abs(density - std::sqrt(1 + g.Df(q).squaredNorm())) <= 1e-10);
    }
  }
}

TEST_CASE("catenoid inequality examples") {
  const auto v = catenoid_inequalities({0.0, 1.0, 10.0});
  REQUIRE(v.rows.size() == 3);
  CHECK(v.rows[0].equality);
  CHECK(v.rows[1].sinh_cosh == doctest::Approx(1.8134302039).epsilon(1e-9));
  CHECK(v.rows[1].sinh == doctest::Approx(1.1752011936).epsilon(1e-9));
  CHECK(v.rows[1].t_cosh == doctest::Approx(1.5430806348).epsilon(1e-9));
  CHECK(v.rows[2].sinh_cosh - 10 > 1e3);
  CHECK(v.rows[2].t_cosh - v.rows[2].sinh > 1e3);
  CHECK(v.strict_for_positive_t);
  CHECK(v.equality_only_at_zero);
  CHECK_THROWS_AS(catenoid_inequalities({-0.5}), Error);
}

TEST_CASE("scaled immersion multiplies lengths") {
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(1.0, 2.0));
  const Immersion big = scaled(imm, 3.0);
  const Vec q = vec({0.5, 1.0});
  CHECK((big.point(q) - 3.0 * imm.point(q)).norm() <= 1e-14);
  CHECK(point_frame(big, q).principal_curvatures[1] ==
        doctest::Approx(point_frame(imm, q).principal_curvatures[1] / 3).epsilon(1e-13));
}

TEST_CASE("surface specs reject bad input") {
  CHECK_THROWS_AS(make_immersion(SurfaceSpec::plane(2, -1.0)), Error);
  CHECK_THROWS_AS(make_immersion(SurfaceSpec::catenoid(0.0, 2.0)), Error);
  CHECK_THROWS_AS(make_immersion(SurfaceSpec::graph_of(GraphFunctionSpec::scherk(), 2.0)), Error);
  CHECK_THROWS_AS(GraphFunctionSpec::from_family("sphere", 2, {}, 0), Error);
  CHECK_THROWS_AS(GraphFunctionSpec::from_family("linear", 2, {1.0}, 0), Error);
  CHECK(surface_kind_from_name("helicoid") == SurfaceSpec::Kind::Helicoid);
}
