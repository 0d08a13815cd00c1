#pragma once

#include "minlap/geometry.hpp"
#include "minlap/meshing.hpp"

#include <vector>

namespace minlap {

struct EigenOptions {
  double tol = 1e-8;          // relative residual ‖Kv − λMv‖ / (|λ| ‖Mv‖)
  int max_iterations = 500;   // block steps
  double shift = 0.0;         // shift-invert center σ
  int block_size = 0;         // 0 picks min(max(k, 2), 4)
};

struct EigenResult {
  Vec eigenvalues;               // ascending
  Mat eigenvectors;              // columns, M-orthonormal
  std::vector<double> residuals;
  int iterations = 0;
};

/// k smallest eigenpairs of K v = λ M v (above the shift) by block Lanczos on
/// (K − σM)⁻¹M with full M-orthogonalization and thick restarts.
EigenResult smallest_eigenpairs(const SparseMat& K, const SparseMat& M, int k, const EigenOptions& options = {});
EigenResult smallest_eigenpairs(const Pencil& pencil, int k, const EigenOptions& options = {});

/// Dense reference solution of the same pencil.
EigenResult dense_eigenpairs(const Mat& K, const Mat& M, int k);

struct Lambda1Point {
  double r = 0;
  double lambda1 = 0;
  std::size_t vertices = 0;
  double max_edge = 0;
};

struct Lambda1Curve {
  std::vector<Lambda1Point> points;
  bool strictly_decreasing = true;
};

/// Dirichlet λ₁ of the extrinsic balls B̃_r for ascending radii.
Lambda1Curve lambda1_curve(const Immersion& imm, const BasePoint& base, const std::vector<double>& radii,
                           int resolution, const EigenOptions& options = {});

}  // namespace minlap
