#include "minlap/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> surface, out, radii, base, graph_family, field;
  std::optional<int> n, m_max, level, resolution, grid, bdgg_m, rings;
  std::optional<double> lambda, xi, neck_radius, pitch, radius, t_max, R;
  bool export_mesh = false;
};

void add_flags(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "JSON configuration file");
  app.add_option("--surface", o.surface, "plane | graph | catenoid | helicoid");
  app.add_option("--n", o.n, "surface dimension");
  app.add_option("--graph-family", o.graph_family, "graph family (zero, linear, paraboloid, square, cubic, scherk)");
  app.add_option("--neck-radius", o.neck_radius, "catenoid neck radius");
  app.add_option("--pitch", o.pitch, "helicoid pitch");
  app.add_option("--radius", o.radius, "chart radius (plane, graph, helicoid)");
  app.add_option("--t-max", o.t_max, "catenoid height or helicoid angle bound");
  app.add_option("--base", o.base, "origin, ambient:x,y,z or surface:q1,q2");
  app.add_option("--radii", o.radii, "radii as a:b:count or x,y,z (volume and spectrum)");
  app.add_option("--level", o.level, "quadrature level");
  app.add_option("--resolution", o.resolution, "mesh resolution for spectrum");
  app.add_option("--grid", o.grid, "audit chart grid size");
  app.add_option("--lambda", o.lambda, "spectral parameter (weyl and pohozaev)");
  app.add_option("--xi", o.xi, "asymptotic |dr(nu)| for the Weyl sequence");
  app.add_option("--m-max", o.m_max, "last Weyl schedule index");
  app.add_option("--field", o.field, "pohozaev test field: gaussian | constant | coordinate");
  app.add_option("--bdgg-m", o.bdgg_m, "BdGG half dimension m");
  app.add_option("--bdgg-R", o.R, "reduced-domain radius");
  app.add_option("--rings", o.rings, "reduced-domain rings");
  app.add_option("--out", o.out, "output directory");
  app.add_flag("--export-mesh", o.export_mesh, "write OFF meshes of the spectrum balls");
}

minlap::RunConfig resolve(const std::string& sub, const Overrides& o) {
  minlap::RunConfig c = o.config.empty() ? minlap::RunConfig{} : minlap::load_config(o.config);
  if (o.surface) c.surface.kind = *o.surface;
  if (o.n) c.surface.n = *o.n;
  if (o.graph_family) c.surface.graph_family = *o.graph_family;
  if (o.neck_radius) c.surface.neck_radius = *o.neck_radius;
  if (o.pitch) c.surface.pitch = *o.pitch;
  if (o.radius) c.surface.radius = *o.radius;
  if (o.t_max) c.surface.t_max = *o.t_max;
  if (o.base) {
    const std::string& b = *o.base;
    const auto colon = b.find(':');
    c.base.kind = b.substr(0, colon);
    c.base.point = colon == std::string::npos ? std::vector<double>{} : minlap::parse_list(b.substr(colon + 1));
  }
  if (o.radii) {
    const auto r = minlap::parse_list(*o.radii);
    if (sub == "spectrum") c.spectrum_radii = r;
    else c.radii = r;
  }
  if (o.level) c.quadrature_level = *o.level;
  if (o.resolution) c.mesh_resolution = *o.resolution;
  if (o.grid) c.audit_grid = *o.grid;
  if (o.lambda) c.weyl_lambda = c.pohozaev_lambda = *o.lambda;
  if (o.xi) c.weyl_xi = *o.xi;
  if (o.m_max) c.m_max = *o.m_max;
  if (o.field) c.field = *o.field;
  if (o.bdgg_m) c.bdgg_m = *o.bdgg_m;
  if (o.R) c.bdgg_R = *o.R;
  if (o.rings) c.bdgg_rings = *o.rings;
  if (o.out) c.out = *o.out;
  if (o.export_mesh) c.export_mesh = true;
  // The default field center lives in R^3; move it along with the dimension.
  if (c.field == "gaussian" && static_cast<int>(c.field_center.size()) != c.surface.n + 1)
    c.field_center.resize(c.surface.n + 1, 0.0);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the Laplace spectrum of minimal hypersurfaces", "minlap"};
  app.set_version_flag("--version", minlap::tool_version());
  app.require_subcommand(1);
  Overrides o;
  const std::pair<const char*, const char*> subs[] = {
      {"volume", "extrinsic volume growth"},
      {"spectrum", "Dirichlet lambda_1 of extrinsic balls"},
      {"weyl", "Weyl-sequence residuals"},
      {"audit", "curvature decay and normal-component audit"},
      {"pohozaev", "integral identity and eigenfunction-absence audit"},
      {"bdgg", "BdGG barriers and reduced minimal surface solve"},
      {"all", "every subcommand in turn"}};
  for (const auto& [name, help] : subs) add_flags(*app.add_subcommand(name, help), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const minlap::RunOutcome out = minlap::run(sub, resolve(sub, o));
    for (const auto& v : out.envelope.verdicts)
      std::cout << v.status << "  " << v.name << ": " << v.detail << '\n';
    std::cout << "report: " << out.files.back() << '\n';
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "minlap: " << e.what() << '\n';
    return 1;
  }
}
