#pragma once

#include "minlap/geometry.hpp"
#include "minlap/surfaces.hpp"

#include <string>
#include <vector>

namespace fixtures {

struct Named {
  std::string name;
  minlap::SurfaceSpec spec;
};

/// The minimal catalog surfaces at moderate truncation.
inline std::vector<Named> minimal_catalog() {
  using minlap::GraphFunctionSpec;
  using minlap::SurfaceSpec;
  return {{"plane2", SurfaceSpec::plane(2, 5.0)},
          {"plane3", SurfaceSpec::plane(3, 4.0)},
          {"catenoid", SurfaceSpec::catenoid(1.0, 3.0)},
          {"catenoid_c2", SurfaceSpec::catenoid(2.0, 4.0)},
          {"helicoid", SurfaceSpec::helicoid(1.0, 3.0, 4.0)},
          {"linear", SurfaceSpec::graph_of(GraphFunctionSpec::linear({0.7, -1.3}, 0.4), 4.0)},
          {"scherk", SurfaceSpec::graph_of(GraphFunctionSpec::scherk(), 1.2)}};
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace fixtures
