#include "fixtures.hpp"
#include "minlap/eigensolve.hpp"
#include "minlap/error.hpp"
#include "minlap/meshing.hpp"
#include "minlap/surfaces.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace minlap;
using fixtures::vec;

namespace {

constexpr double kJ01Squared = 5.783185962946784;

Mat random_spd(int n, std::mt19937_64& rng, double floor) {
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return a * a.transpose() / n + floor * Mat::Identity(n, n);
}

double disk_lambda1(int resolution) {
  const TriMesh mesh = triangulate(make_immersion(SurfaceSpec::plane(2, 1.0)), resolution);
  return smallest_eigenpairs(dirichlet_reduce(assemble(mesh)), 1).eigenvalues[0];
}

}  // namespace

TEST_CASE("iterative eigensolver matches the dense oracle on random pencils") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const Mat K = random_spd(50, rng, 0.05), M = random_spd(50, rng, 0.5);
    const EigenResult dense = dense_eigenpairs(K, M, 4);
    EigenOptions opt;
    opt.tol = 1e-12;
    const EigenResult it = smallest_eigenpairs(K.sparseView(), M.sparseView(), 4, opt);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(it.eigenvalues[i] - dense.eigenvalues[i]) <= 1e-8 * std::abs(dense.eigenvalues[i]));
      const Vec v = it.eigenvectors.col(i);
      CHECK(v.dot(M * v) == doctest::Approx(1).epsilon(1e-10));
      CHECK(it.residuals[static_cast<std::size_t>(i)] <= 1e-10);
    }
  }
}

TEST_CASE("dense oracle solves a diagonal pencil exactly") {
  const Mat K = vec({4, 1, 9, 2}).asDiagonal();
  const Mat M = vec({2, 1, 3, 4}).asDiagonal();
  const EigenResult r = dense_eigenpairs(K, M, 4);
  CHECK(r.eigenvalues[0] == doctest::Approx(0.5));
  CHECK(r.eigenvalues[1] == doctest::Approx(1));
  CHECK(r.eigenvalues[2] == doctest::Approx(2));
  CHECK(r.eigenvalues[3] == doctest::Approx(3));
}

TEST_CASE("unit disk Dirichlet lambda_1 converges from above to j01^2") {
  double prev = INFINITY;
  for (int res : {16, 32, 72}) {
    const double l = disk_lambda1(res);
    CAPTURE(res);
    CHECK(l > kJ01Squared);
    CHECK(l < prev);
    prev = l;
  }
  CHECK(std::abs(prev - kJ01Squared) <= 0.01 * kJ01Squared);
}

TEST_CASE("discrete eigenvalues scale by c^-2 under c F") {
  const Immersion imm = make_immersion(SurfaceSpec::catenoid(1.0, 1.5));
  const Vec base = smallest_eigenpairs(dirichlet_reduce(assemble(triangulate(imm, 12))), 3).eigenvalues;
  for (double c : {0.5, 2.0, 10.0}) {
    CAPTURE(c);
    const Vec ev = smallest_eigenpairs(dirichlet_reduce(assemble(triangulate(scaled(imm, c), 12))), 3).eigenvalues;
    for (int i = 0; i < 3; ++i) CHECK(std::abs(ev[i] * c * c - base[i]) <= 1e-10 * base[i]);
  }
}

TEST_CASE("lambda_1 of plane extrinsic balls is j01^2 / r^2") {
  const Immersion imm = make_immersion(SurfaceSpec::plane(2, 25.0));
  const Lambda1Curve c = lambda1_curve(imm, BasePoint::ambient_point(vec({0, 0, 0})), {2.0, 5.0, 20.0}, 32);
  CHECK(c.strictly_decreasing);
  for (const auto& p : c.points) CHECK(p.lambda1 * p.r * p.r == doctest::Approx(kJ01Squared).epsilon(0.01));
}

TEST_CASE("eigensolver input validation") {
  const Mat K = Mat::Identity(3, 3);
  CHECK_THROWS_AS(smallest_eigenpairs(K.sparseView(), K.sparseView(), 0), Error);
  CHECK_THROWS_AS(smallest_eigenpairs(K.sparseView(), Mat::Zero(3, 3).sparseView(), 1), Error);
}
