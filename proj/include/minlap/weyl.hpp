#pragma once

#include "minlap/geometry.hpp"

#include <complex>
#include <vector>

namespace minlap {

struct WeylRow {
  int m = 0;
  double a = 0, b = 0, c = 0, d = 0;  // c < a < b < d
  int k = 0;                          // ε = 2^{-k}
  double eps = 0;
  double C = 0;                       // cutoff derivative bound
};

struct WeylSchedule {
  int n = 2;
  double C_n = 0, F_n = 0;
  double alpha = 2;   // schedule exponent
  double theta = 1;   // (C_n / F_n)^{1/n}
  double tau = 0;     // θ^{-n} (2^{-n} − 2^{-αn})
  double E = 8;
  double d0 = 8;
  double lambda = 1;
  std::vector<WeylRow> rows;

  const WeylRow& row(int m) const;
  /// (F_n/C_n)(b/d)ⁿ − (a/d)ⁿ for a row; at least τ by construction.
  double mass_margin(const WeylRow& r) const;
};

/// d_m = m d₀, b = d/2, a = d/(2^α θ), c = a/2, ε = 2^{-k} with k the least
/// exponent such that ε C_m ≤ 1/m and k nondecreasing along m.
WeylSchedule build_schedule(int n, double C_n, double F_n, double alpha, int m_max, double lambda,
                            double d0 = 8.0, double E = 8.0);

/// ψ = 1 on [a, b], 0 outside (c, d), quintic smoothstep transitions.
struct Cutoff {
  double a = 0, b = 0, c = 0, d = 0;

  struct Value {
    double psi = 0, d1 = 0, d2 = 0;
  };
  Value operator()(double t) const;
  /// Exact maxima of |ψ'| and |ψ''| over both transitions.
  double max_d1() const;
  double max_d2() const;
};

Cutoff cutoff(const WeylSchedule& schedule, int m);

/// u and the three residual terms at one chart point, with η supplied.
struct WeylPointwise {
  std::complex<double> u, t11, t12, t13;
  std::complex<double> sum() const { return t11 + t12 + t13; }
};

WeylPointwise weyl_pointwise(const Jet& jet, const PointFrame& frame, const Vec& base, const Cutoff& psi, double eps,
                             double eta, double lambda, double xi);

struct WeylReportRow {
  int m = 0;
  double eps = 0, C = 0;
  double a = 0, b = 0, c = 0, d = 0;
  double eta = 0;
  double mass = 0;
  double T11 = 0, T12 = 0, T13 = 0;
  double B14 = 0, B15 = 0, B16 = 0;
  double xi_sup = 0;          // sampled sup of |dr̃(ν)| on the annulus
  double residual_ratio = 0;  // ‖Δu + ζ²λu‖ / ‖u‖
  double lambda = 0, xi = 0, zeta2 = 0;
  double certified = 0;       // ζ² λ
  int quadrature_level = 0;
};

WeylReportRow weyl_residual(const Immersion& imm, const BasePoint& base, const WeylSchedule& schedule, int m,
                            double xi, int level = 3);

struct WeylReport {
  WeylSchedule schedule;
  std::vector<WeylReportRow> rows;
  bool mass_ok = true;         // mass ≥ τ − 1e-2
  bool bounds_ok = true;       // T11 ≤ B14, T12 ≤ B15, T13 ≤ B16 (relative 1e-6)
  bool ratio_decreasing = true;
};

WeylReport weyl_run(const Immersion& imm, const BasePoint& base, const WeylSchedule& schedule, double xi,
                    int level = 3);

}  // namespace minlap
