#include "minlap/bdgg.hpp"
#include "minlap/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace minlap;
namespace bd = minlap::bdgg;

TEST_CASE("exponents for m = 4 are exact") {
  const bd::Params p = bd::params(4);
  CHECK(p.valid);
  CHECK(p.p == 3);
  CHECK(p.delta == 1.0);
  CHECK(p.alpha == 1.5);
  CHECK(p.lambda_lo == 1.3125);
  CHECK(p.lambda_hi == 4.0 / 3.0);
  CHECK(p.lambda > p.lambda_lo);
  CHECK(p.lambda < p.lambda_hi);
}

TEST_CASE("exponents for other m") {
  const bd::Params p5 = bd::params(5);
  CHECK(p5.valid);
  CHECK(p5.delta == 17.0);
  CHECK(p5.alpha == doctest::Approx((9 - std::sqrt(17.0)) / 4).epsilon(1e-15));
  CHECK(p5.lambda_lo < p5.lambda_hi);
  CHECK_FALSE(bd::params(3).valid);
  CHECK(bd::params(3).delta == -7.0);
  CHECK_FALSE(bd::params(4, 1.4).valid);
  CHECK_THROWS_AS(bd::params(1), Error);
  CHECK_THROWS_AS(bd::P(1.0, bd::params(3)), Error);
}

TEST_CASE("f1 in block radii") {
  const bd::Params p = bd::params(4);
  CHECK(bd::f1_uv(2, 1, p) == doctest::Approx(3 * std::sqrt(5.0)).epsilon(1e-15));
  CHECK(bd::f1_uv(1, 2, p) == -bd::f1_uv(2, 1, p));
  CHECK(bd::f1_uv(1.3, 1.3, p) == 0.0);
  for (double u : {0.5, 1.0, 3.0, 10.0}) CHECK(bd::f1_uv(u, 0, p) == std::pow(u, 2 * p.alpha));
  // Blocks of R^8: x = (1, 1, 0, 0 | 0, 1, 0, 0) has u = √2, v = 1.
  const std::vector<double> x{1, 1, 0, 0, 0, 1, 0, 0};
  CHECK(bd::f1(x, p) == doctest::Approx(bd::f1_uv(std::sqrt(2.0), 1, p)).epsilon(1e-15));
  CHECK_THROWS_AS(bd::f1({1, 2, 3}, p), Error);
}

TEST_CASE("inner integral: closed form at zero and monotone decay") {
  const bd::Params p = bd::params(4);
  const double s = p.lambda - 1, b = 2 * p.alpha * s;
  CHECK(bd::inner_integral_at_zero(p) == doctest::Approx(std::numbers::pi / b / std::sin(std::numbers::pi * s / b)).epsilon(1e-15));
  CHECK(bd::inner_integral(0, p) == doctest::Approx(bd::inner_integral_at_zero(p)).epsilon(1e-10));
  double prev = bd::inner_integral(0, p);
  for (double w : {0.01, 0.5, 1.0, 4.0, 100.0}) {
    const double v = bd::inner_integral(w, p);
    CHECK(v < prev);
    CHECK(v > 0);
    prev = v;
  }
  // Far tail: t^{λ−2 − 2α(λ−1)} integrates to w^{s − b}/(b − s).
  const double w = 1e6;
  CHECK(bd::inner_integral(w, p) == doctest::Approx(std::pow(w, s - b) / (b - s)).epsilon(1e-6));
}

TEST_CASE("P is odd, increasing and above the identity") {
  const bd::Params p = bd::params(4);
  double prev = 0;
  for (int i = 1; i <= 12; ++i) {
    const double z = 0.5 * i;
    const double v = bd::P(z, p);
    CHECK(v >= z);
    CHECK(v > prev);
    CHECK(bd::P(-z, p) == -v);
    prev = v;
  }
  CHECK(bd::P(0, p) == 0.0);
}

TEST_CASE("f2 dominates f1 where u > v") {
  const bd::Params p = bd::params(4);
  for (auto [u, v] : {std::pair{1.0, 0.5}, {2.0, 0.0}, {3.0, 2.9}}) {
    CAPTURE(u);
    CHECK(bd::f2_uv(u, v, p) >= bd::f1_uv(u, v, p));
    CHECK(bd::f2_uv(v, u, p) == -bd::f2_uv(u, v, p));
  }
}

TEST_CASE("quarter disk mesh is exactly symmetric") {
  const bd::QuarterDisk d = bd::quarter_disk(2.0, 6);
  CHECK(d.points.size() == 49);
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    const auto j = static_cast<std::size_t>(d.mirror[i]);
    CHECK(d.mirror[j] == static_cast<int>(i));
    CHECK(d.points[j][0] == d.points[i][1]);
    CHECK(d.points[j][1] == d.points[i][0]);
    CHECK(d.on_arc[i] == d.on_arc[j]);
  }
  double area = 0;
  for (const auto& t : d.triangles) {
    const auto& a = d.points[t[0]];
    const auto& b = d.points[t[1]];
    const auto& c = d.points[t[2]];
    const double s = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    CHECK(s > 0);
    area += s / 2;
  }
  CHECK(area < std::numbers::pi);
  CHECK(area > 0.97 * std::numbers::pi);
}

TEST_CASE("reduced solve at m = 4 converges to an antisymmetric solution") {
  const bd::Params p = bd::params(4);
  const bd::ReducedSolution s = bd::solve_reduced_mse(p, 5.0, 24);
  CHECK(s.residual_norm <= 1e-10 * std::max(1.0, s.initial_residual));
  CHECK(s.newton_iterations < 60);
  CHECK(s.antisymmetry <= 1e-8);
  CHECK(s.diagonal_max <= 1e-8);
  for (std::size_t i = 0; i < s.f.size(); ++i)
    if (s.mesh.on_arc[i]) CHECK(s.f[i] == bd::f1_uv(s.mesh.points[i][0], s.mesh.points[i][1], p));
  const bd::BarrierReport b = bd::barrier_ordering(s, p, 3);
  CHECK(b.samples > 0);
  CHECK_THROWS_AS(bd::gradient_estimate(s, p, {3.0}), Error);
}

TEST_CASE("probe controls: u - v is 1-homogeneous, u - v + 1 is not") {
  const std::vector<double> edges{0, 1, 2, 4};
  const auto zero = bd::normal_alignment_probe(bd::sample_function([](double u, double v) { return u - v; }, 4.0, 16),
                                               edges);
  for (const auto& sh : zero) {
    REQUIRE(sh.count > 0);
    CHECK(sh.xi_max <= 1e-12);
  }
  const auto shifted = bd::normal_alignment_probe(
      bd::sample_function([](double u, double v) { return u - v + 1; }, 4.0, 16), edges);
  for (const auto& sh : shifted) CHECK(sh.xi_min > 1e-3);
}
