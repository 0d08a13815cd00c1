#pragma once

#include "minlap/geometry.hpp"
#include "minlap/quadrature.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace minlap {

using SparseMat = Eigen::SparseMatrix<double>;

struct TriMesh {
  std::vector<Vec> chart;      // chart coordinates per vertex
  std::vector<Vec> points;     // embedded coordinates per vertex
  std::vector<std::array<int, 3>> triangles;  // counterclockwise in the chart
  std::vector<bool> boundary;
  std::vector<double> r_tilde;  // empty unless a base was stored

  std::size_t vertex_count() const { return points.size(); }
  std::size_t interior_count() const;
  double area() const;
  double max_edge_length() const;
  double triangle_area(std::size_t t) const;
};

/// Structured mesh of the whole chart: polar rings for disks (ring k holds 4k
/// vertices), split quads for rectangles with periodic coordinates identified.
TriMesh triangulate(const Immersion& imm, int resolution);

/// Mesh of the extrinsic ball {r̃ ≤ r} whose boundary vertices lie on r̃ = r.
/// Disk and non-periodic rectangle charts use a polar mesh that is star-shaped
/// about the base chart point (or the chart center); charts periodic in the
/// second coordinate use a band mesh with one interval per angular column.
TriMesh ball_mesh(const Immersion& imm, const BasePoint& base, double r, int resolution);

struct FemPair {
  SparseMat K;
  SparseMat M;
  std::vector<int> dirichlet_map;  // full index → interior index, -1 on the boundary
};

/// Stiffness and mass restricted to interior vertices.
struct Pencil {
  SparseMat K;
  SparseMat M;
};

/// P1 cotangent stiffness and consistent mass from the embedded triangles.
FemPair assemble(const TriMesh& mesh);
Pencil dirichlet_reduce(const FemPair& pair);

/// Area of {r̃ ≤ r}; throws TruncationTooSmall when the ball leaves the chart.
double extrinsic_ball_volume(const Immersion& imm, const BasePoint& base, double r, int level = 3);

/// Quadrature options used for a given level (depth 6, 4-point Gauss rule).
quadrature::Options quadrature_options(int level);

void write_off(const TriMesh& mesh, std::ostream& out);
void write_off(const TriMesh& mesh, const std::string& path);

}  // namespace minlap
