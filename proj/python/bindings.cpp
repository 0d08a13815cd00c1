#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minlap/bdgg.hpp"
#include "minlap/diagnostics.hpp"
#include "minlap/eigensolve.hpp"
#include "minlap/error.hpp"
#include "minlap/geometry.hpp"
#include "minlap/meshing.hpp"
#include "minlap/run.hpp"
#include "minlap/surfaces.hpp"

namespace py = pybind11;
using namespace minlap;

namespace {

// Config and reports cross the boundary as JSON text so Python sees plain dicts.
RunConfig config_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigParse, e.what());
  }
  return config_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Laplace spectrum of minimal hypersurfaces: core bindings";

  py::register_exception<Error>(m, "MinlapError", PyExc_RuntimeError);

  py::enum_<SurfaceSpec::Kind>(m, "SurfaceKind")
      .value("Plane", SurfaceSpec::Kind::Plane)
      .value("Graph", SurfaceSpec::Kind::Graph)
      .value("Catenoid", SurfaceSpec::Kind::Catenoid)
      .value("Helicoid", SurfaceSpec::Kind::Helicoid);

  py::class_<GraphFunctionSpec>(m, "GraphFunctionSpec")
      .def_static("from_family", &GraphFunctionSpec::from_family, py::arg("family"), py::arg("n") = 2,
                  py::arg("coefficients") = std::vector<double>{}, py::arg("offset") = 0.0)
      .def_readonly("label", &GraphFunctionSpec::label)
      .def_readonly("minimal", &GraphFunctionSpec::minimal)
      .def("f", [](const GraphFunctionSpec& g, const Vec& q) { return g.f(q); });

  py::class_<SurfaceSpec>(m, "SurfaceSpec")
      .def_static("plane", &SurfaceSpec::plane, py::arg("n"), py::arg("radius"))
      .def_static("graph_of", &SurfaceSpec::graph_of, py::arg("graph"), py::arg("radius"))
      .def_static("catenoid", &SurfaceSpec::catenoid, py::arg("neck_radius"), py::arg("t_max"))
      .def_static("helicoid", &SurfaceSpec::helicoid, py::arg("pitch"), py::arg("s_max"), py::arg("theta_max"))
      .def_readonly("kind", &SurfaceSpec::kind)
      .def_readonly("n", &SurfaceSpec::n)
      .def("minimal", &SurfaceSpec::minimal)
      .def("kind_name", &SurfaceSpec::kind_name);

  py::class_<Immersion>(m, "Immersion")
      .def_readonly("dim", &Immersion::dim)
      .def("point", &Immersion::point)
      .def("contains", [](const Immersion& imm, const Vec& q) { return imm.domain.contains(q); });
  m.def("make_immersion", &make_immersion);
  m.def("scaled", &scaled, py::arg("immersion"), py::arg("c"));

  py::class_<BasePoint>(m, "BasePoint")
      .def_static("ambient_point", &BasePoint::ambient_point)
      .def_static("surface_point", &BasePoint::surface_point)
      .def_readonly("ambient", &BasePoint::ambient)
      .def_readonly("on_surface", &BasePoint::on_surface);

  py::class_<PointFrame>(m, "PointFrame")
      .def_readonly("metric", &PointFrame::metric)
      .def_readonly("normal", &PointFrame::normal)
      .def_readonly("shape", &PointFrame::shape)
      .def_readonly("principal_curvatures", &PointFrame::principal_curvatures)
      .def_readonly("mean_curvature", &PointFrame::mean_curvature);
  m.def("point_frame", py::overload_cast<const Immersion&, const Vec&>(&point_frame));

  py::class_<ExtrinsicCalc>(m, "ExtrinsicCalc")
      .def_readonly("r_tilde", &ExtrinsicCalc::r_tilde)
      .def_readonly("grad_norm", &ExtrinsicCalc::grad_norm)
      .def_readonly("normal_component", &ExtrinsicCalc::normal_component)
      .def_readonly("laplacian_r", &ExtrinsicCalc::laplacian_r)
      .def_readonly("hess_h", &ExtrinsicCalc::hess_h);
  m.def("extrinsic_calculus",
        py::overload_cast<const Immersion&, const BasePoint&, const Vec&>(&extrinsic_calculus));
  m.def("minimality_residual", &minimality_residual);
  m.def("omega", &omega);

  m.def("extrinsic_ball_volume", &extrinsic_ball_volume, py::arg("immersion"), py::arg("base"), py::arg("r"),
        py::arg("level") = 3);

  py::class_<Lambda1Point>(m, "Lambda1Point")
      .def_readonly("r", &Lambda1Point::r)
      .def_readonly("lambda1", &Lambda1Point::lambda1)
      .def_readonly("vertices", &Lambda1Point::vertices);
  m.def(
      "lambda1_curve",
      [](const Immersion& imm, const BasePoint& base, const std::vector<double>& radii, int resolution) {
        const Lambda1Curve c = lambda1_curve(imm, base, radii, resolution);
        return std::make_pair(c.points, c.strictly_decreasing);
      },
      py::arg("immersion"), py::arg("base"), py::arg("radii"), py::arg("resolution") = 32);

  py::module_ bd = m.def_submodule("bdgg", "BdGG barriers");
  py::class_<bdgg::Params>(bd, "Params")
      .def_readonly("m", &bdgg::Params::m)
      .def_readonly("p", &bdgg::Params::p)
      .def_readonly("delta", &bdgg::Params::delta)
      .def_readonly("alpha", &bdgg::Params::alpha)
      .def_readonly("lambda_lo", &bdgg::Params::lambda_lo)
      .def_readonly("lambda_hi", &bdgg::Params::lambda_hi)
      .def_readonly("lambda_", &bdgg::Params::lambda)
      .def_readonly("valid", &bdgg::Params::valid);
  bd.def("params", &bdgg::params, py::arg("m"), py::arg("lam") = 0.0, py::arg("B") = 10.0, py::arg("D") = 10.0);
  bd.def("f1_uv", &bdgg::f1_uv);
  bd.def("f2_uv", &bdgg::f2_uv);
  bd.def("P", &bdgg::P);

  m.def("format_double", &format_double);
  m.def("version", &tool_version);
  m.def("default_config", [] { return config_to_json(RunConfig{}).dump(); });
  m.def(
      "run",
      [](const std::string& subcommand, const std::string& config_text) {
        const RunConfig config = config_from_text(config_text);
        RunOutcome out;
        {
          py::gil_scoped_release release;
          out = run(subcommand, config);
        }
        return py::make_tuple(out.exit_code, out.envelope.to_json().dump(), out.files);
      },
      py::arg("subcommand"), py::arg("config_json"));
}
