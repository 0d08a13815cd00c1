#include "minlap/eigensolve.hpp"

#include "minlap/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace minlap {

namespace {

/// Orthonormalizes the columns of X against `basis` (given with M·basis) and
/// among themselves in the M inner product. Columns that vanish are dropped.
Mat m_orthonormalize(Mat X, const Mat& basis, const Mat& m_basis, const SparseMat& M) {
  for (int pass = 0; pass < 2; ++pass)
    if (basis.cols() > 0) X -= basis * (m_basis.transpose() * X);
  Mat out(X.rows(), 0);
  Mat m_out(X.rows(), 0);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    Vec v = X.col(j);
    const double start = std::sqrt(std::max(v.dot(M * v), 0.0));
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.cols() > 0) v -= basis * (m_basis.transpose() * v);
      if (out.cols() > 0) v -= out * (m_out.transpose() * v);
    }
    const Vec mv = M * v;
    const double norm = std::sqrt(std::max(v.dot(mv), 0.0));
    if (!(norm > 1e-10 * start) || norm == 0.0) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    m_out.conservativeResize(Eigen::NoChange, m_out.cols() + 1);
    out.col(out.cols() - 1) = v / norm;
    m_out.col(m_out.cols() - 1) = mv / norm;
  }
  return out;
}

/// Cosine modes first, first+1, ... on the index range; mode 0 is the constant vector.
Mat cosine_block(Eigen::Index n, Eigen::Index first, int count) {
  Mat X(n, count);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < count; ++j)
      X(i, j) = std::cos(std::numbers::pi * static_cast<double>(first + j) * (static_cast<double>(i) + 0.5) /
                         static_cast<double>(n));
  return X;
}

void append(Mat& A, const Mat& B) {
  const Eigen::Index c = A.cols();
  A.conservativeResize(Eigen::NoChange, c + B.cols());
  A.rightCols(B.cols()) = B;
}

}  // namespace

EigenResult smallest_eigenpairs(const SparseMat& K, const SparseMat& M, int k, const EigenOptions& options) {
  const Eigen::Index n = K.rows();
  require(k >= 1, ErrorCode::InvalidArgument, "number of eigenpairs must be positive");
  require(K.cols() == n && M.rows() == n && M.cols() == n && n > 0, ErrorCode::InvalidArgument,
          "pencil dimensions mismatch");
  require(k <= n, ErrorCode::InvalidArgument, "more eigenpairs requested than the pencil dimension");
  require(options.tol > 0 && options.max_iterations > 0, ErrorCode::InvalidArgument, "invalid solver settings");

  Eigen::SimplicialLDLT<SparseMat> mass(M);
  if (mass.info() != Eigen::Success || !(mass.vectorD().minCoeff() > 0))
    fail(ErrorCode::SingularMass, "mass matrix is not positive definite");
  SparseMat shifted = K - options.shift * M;
  Eigen::SimplicialLDLT<SparseMat> solver(shifted);
  if (solver.info() != Eigen::Success || solver.vectorD().cwiseAbs().minCoeff() == 0.0)
    fail(ErrorCode::InvalidArgument, "shifted pencil is singular; choose another shift");
  const auto apply = [&](const Mat& X) {
    Mat Y = solver.solve(M * X);
    return Y;
  };

  const int b = static_cast<int>(std::min<Eigen::Index>(
      options.block_size > 0 ? options.block_size : std::min(std::max(k, 2), 4), n));
  const Eigen::Index max_basis = std::min<Eigen::Index>(n, std::max(20 * b, 2 * k + 4 * b));

  Mat V(n, 0), MV(n, 0), AV(n, 0);
  Mat P = m_orthonormalize(cosine_block(n, 0, b), V, MV, M);
  EigenResult result;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    if (P.cols() == 0) {
      // Invariant subspace: continue with fresh deterministic directions.
      P = m_orthonormalize(cosine_block(n, V.cols() % n, b), V, MV, M);
    }
    if (P.cols() > 0) {
      const Mat AP = apply(P);
      append(V, P);
      append(MV, M * P);
      append(AV, AP);
      P = V.cols() < n ? m_orthonormalize(AP, V, MV, M) : Mat(n, 0);
    }

    Mat T = MV.transpose() * AV;
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> ritz(T);
    const Eigen::Index dim = T.rows();
    if (dim < k) continue;
    // θ = 1/(λ − σ): the largest θ belong to the smallest λ above the shift.
    const Mat Y = ritz.eigenvectors().rowwise().reverse();
    const Vec theta = ritz.eigenvalues().reverse();
    result.eigenvalues.resize(k);
    result.eigenvectors = V * Y.leftCols(k);
    result.residuals.assign(static_cast<std::size_t>(k), 0.0);
    bool done = true;
    for (int j = 0; j < k; ++j) {
      const double lambda = options.shift + 1.0 / theta[j];
      result.eigenvalues[j] = lambda;
      const Vec x = result.eigenvectors.col(j);
      const Vec mx = M * x;
      const double scale = std::max(std::abs(lambda), 1e-300) * mx.norm();
      result.residuals[static_cast<std::size_t>(j)] = (K * x - lambda * mx).norm() / scale;
      done = done && result.residuals[static_cast<std::size_t>(j)] <= options.tol;
    }
    if (done || dim == n) {
      // Sort ascending (Ritz order is ascending already for σ below the spectrum).
      std::vector<int> order(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) order[static_cast<std::size_t>(j)] = j;
      std::sort(order.begin(), order.end(), [&](int a, int c) { return result.eigenvalues[a] < result.eigenvalues[c]; });
      EigenResult sorted;
      sorted.iterations = result.iterations;
      sorted.eigenvalues.resize(k);
      sorted.eigenvectors.resize(n, k);
      for (int j = 0; j < k; ++j) {
        const int s = order[static_cast<std::size_t>(j)];
        sorted.eigenvalues[j] = result.eigenvalues[s];
        sorted.eigenvectors.col(j) = result.eigenvectors.col(s);
        sorted.residuals.push_back(result.residuals[static_cast<std::size_t>(s)]);
      }
      if (!done) {
        for (double r : sorted.residuals)
          if (r > options.tol)
            fail(ErrorCode::NoConvergence, "full-space Ritz pairs miss the residual tolerance");
      }
      return sorted;
    }
    if (V.cols() + b > max_basis) {
      const Eigen::Index keep = std::min<Eigen::Index>(dim, k + 2 * b);
      const Mat Yk = Y.leftCols(keep);
      V = (V * Yk).eval();
      MV = (MV * Yk).eval();
      AV = (AV * Yk).eval();
    }
  }
  fail(ErrorCode::NoConvergence, "eigensolver reached " + std::to_string(options.max_iterations) + " iterations");
}

EigenResult smallest_eigenpairs(const Pencil& pencil, int k, const EigenOptions& options) {
  return smallest_eigenpairs(pencil.K, pencil.M, k, options);
}

EigenResult dense_eigenpairs(const Mat& K, const Mat& M, int k) {
  require(k >= 1 && k <= K.rows(), ErrorCode::InvalidArgument, "invalid eigenpair count");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(K, M);
  if (es.info() != Eigen::Success) fail(ErrorCode::SingularMass, "dense generalized eigensolve failed");
  EigenResult r;
  r.eigenvalues = es.eigenvalues().head(k);
  r.eigenvectors = es.eigenvectors().leftCols(k);
  for (int j = 0; j < k; ++j) {
    const Vec x = r.eigenvectors.col(j);
    const Vec mx = M * x;
    r.residuals.push_back((K * x - r.eigenvalues[j] * mx).norm() / (std::max(std::abs(r.eigenvalues[j]), 1e-300) * mx.norm()));
  }
  return r;
}

Lambda1Curve lambda1_curve(const Immersion& imm, const BasePoint& base, const std::vector<double>& radii,
                           int resolution, const EigenOptions& options) {
  require(!radii.empty(), ErrorCode::InvalidArgument, "no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    require(radii[i] > radii[i - 1], ErrorCode::InvalidArgument, "radii must be ascending");
  Lambda1Curve curve;
  for (double r : radii) {
    const TriMesh mesh = ball_mesh(imm, base, r, resolution);
    const Pencil pencil = dirichlet_reduce(assemble(mesh));
    const EigenResult er = smallest_eigenpairs(pencil, 1, options);
    curve.points.push_back({r, er.eigenvalues[0], mesh.vertex_count(), mesh.max_edge_length()});
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    curve.strictly_decreasing = curve.strictly_decreasing && curve.points[i].lambda1 < curve.points[i - 1].lambda1;
  return curve;
}

}  // namespace minlap
