#include "fixtures.hpp"
#include "minlap/error.hpp"
#include "minlap/geometry.hpp"
#include "minlap/quadrature.hpp"
#include "minlap/surfaces.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace minlap;
using fixtures::vec;
namespace q = minlap::quadrature;

namespace {

constexpr double pi = std::numbers::pi;

q::Options level(int l) {
  q::Options o;
  o.level = l;
  return o;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials up to degree 2p-1") {
  for (int p = 1; p <= 5; ++p) {
    std::vector<double> x, w;
    q::gauss_legendre(p, x, w);
    REQUIRE(static_cast<int>(x.size()) == p);
    for (int deg = 0; deg <= 2 * p - 1; ++deg) {
      double s = 0;
      for (int i = 0; i < p; ++i) s += w[i] * std::pow(x[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-14).scale(1));
    }
  }
}

TEST_CASE("ball about a chart-centred base on the plane is exact") {
  const Immersion imm = make_immersion(SurfaceSpec::plane(2, 4.0));
  CHECK(q::area(imm, q::Region::ball(vec({0, 0, 0}), 1.3), level(3)) == doctest::Approx(pi * 1.69).epsilon(1e-13));
}

// Off-centre circles are clipped linearly at the leaves, so the error is second order in the leaf size.
TEST_CASE("off-centre extrinsic balls converge at second order") {
  const Immersion imm = make_immersion(SurfaceSpec::plane(2, 4.0));
  struct Case {
    Vec center;
    double r, exact_area;
  };
  const std::vector<Case> cases{{vec({0.2, 0.1, 0.0}), 1.3, pi * 1.69}, {vec({0.0, 0.0, 0.6}), 1.0, pi * 0.64}};
  for (const auto& c : cases) {
    std::vector<double> err;
    for (int l = 1; l <= 4; ++l) err.push_back(std::abs(q::area(imm, q::Region::ball(c.center, c.r), level(l)) / c.exact_area - 1));
    CHECK(err[2] <= 1e-8);
    for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i - 1] / err[i] >= 3.5);
  }
  std::vector<double> err;
  for (int l = 1; l <= 4; ++l) {
    const auto r = q::integrate(
        imm, q::Region::ball(vec({0.3, 0, 0}), 2.0), 0, [](const Vec&, const Jet&, double*) {}, 1,
        [](const Vec&, const Jet&, const Vec&, double* out) { out[0] = 1; }, level(l));
    err.push_back(std::abs(r.boundary[0] / (4 * pi) - 1));
  }
  CHECK(err[2] <= 1e-8);
  for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i - 1] / err[i] >= 3.5);
}

TEST_CASE("divergence theorem on a catenoid ball") {
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(1.0, 3.0));
  const AmbientField u = AmbientField::gaussian(vec({0.5, 0.3, 0.2}), 1.2);
  const auto r = q::integrate(
      imm, q::Region::ball(vec({0, 0, 0}), 2.5), 1,
      [&](const Vec&, const Jet& jet, double* out) { out[0] = restrict_field(u, jet, point_frame(jet)).laplacian; }, 1,
      [&](const Vec&, const Jet& jet, const Vec& conormal, double* out) {
        out[0] = restrict_field(u, jet, point_frame(jet)).chart_gradient.dot(conormal);
      },
      level(3));
  CHECK(std::abs(r.domain[0] - r.boundary[0]) <= 1e-8 * (1 + std::abs(r.domain[0])));
  CHECK(r.min_phi_on_chart_edge > 0);
}

TEST_CASE("three-dimensional balls on a hyperplane") {
  const Immersion imm = make_immersion(SurfaceSpec::plane(3, 3.0));
  const auto vol = [](double rho) { return 4.0 / 3.0 * pi * rho * rho * rho; };
  CHECK(q::area(imm, q::Region::ball(vec({0, 0, 0, 0.6}), 1.0), level(3)) ==
        doctest::Approx(vol(0.8)).epsilon(1e-9));
  CHECK(q::area(imm, q::Region::ball(vec({0.4, -0.3, 0.2, 0}), 1.5), level(3)) ==
        doctest::Approx(vol(1.5)).epsilon(1e-6));
  CHECK_THROWS_AS(q::integrate(
                      imm, q::Region::ball(vec({0, 0, 0, 0}), 1.0), 0, [](const Vec&, const Jet&, double*) {}, 1,
                      [](const Vec&, const Jet&, const Vec&, double* out) { out[0] = 1; }, level(1)),
                  Error);
}

TEST_CASE("whole-chart area of the truncated catenoid") {
  const double c = 1.0, T = 1.5;
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(c, T));
  const double exact = 2 * pi * c * (T + c * std::sinh(2 * T / c) / 2);
  CHECK(q::area(imm, q::Region::whole(), level(3)) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("a ball leaving the chart is reported through the chart-edge level") {
  const Immersion imm = make_immersion(SurfaceSpec::plane(2, 1.0));
  const auto r = q::integrate(
      imm, q::Region::ball(vec({0, 0, 0}), 2.0), 1, [](const Vec&, const Jet&, double* out) { out[0] = 1; }, 0, {},
      level(2));
  CHECK(r.min_phi_on_chart_edge < 0);
}

TEST_CASE("results do not depend on the worker count") {
  const Immersion imm = make_immersion(SurfaceSpec::helicoid(1.0, 3.0, 3.0));
  const auto region = q::Region::ball(vec({0.2, 0.1, 0.3}), 2.0);
  const char* saved = std::getenv("MINLAP_THREADS");
  const std::string keep = saved ? saved : "";
  setenv("MINLAP_THREADS", "1", 1);
  const double one = q::area(imm, region, level(2));
  setenv("MINLAP_THREADS", "3", 1);
  const double three = q::area(imm, region, level(2));
  if (saved) setenv("MINLAP_THREADS", keep.c_str(), 1);
  else unsetenv("MINLAP_THREADS");
  CHECK(one == three);
}

TEST_CASE("ball regions need a positive radius") {
  CHECK_THROWS_AS(q::Region::ball(vec({0, 0, 0}), 0.0), Error);
}
