#pragma once

#include "minlap/geometry.hpp"
#include "minlap/surfaces.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace minlap {

using json = nlohmann::json;

struct SurfaceConfig {
  std::string kind = "plane";
  int n = 2;
  // Unset truncation bounds are sized from the radii a subcommand needs.
  std::optional<double> radius;  // chart disk radius (plane, graph) or |s| bound (helicoid)
  std::optional<double> t_max;   // catenoid height or helicoid angle bound
  double neck_radius = 1.0;
  double pitch = 1.0;
  std::string graph_family = "zero";
  std::vector<double> coefficients;
  double offset = 0.0;
};

struct BaseConfig {
  std::string kind = "origin";  // origin | ambient | surface
  std::vector<double> point;    // ambient point or chart coordinates
};

struct RunConfig {
  SurfaceConfig surface;
  BaseConfig base;
  int quadrature_level = 3;

  // volume
  std::vector<double> radii{1, 2, 5, 10, 20, 40};
  std::vector<double> small_radii{0.2, 0.1, 0.05};

  // spectrum
  std::vector<double> spectrum_radii{5, 10, 20, 40};
  int mesh_resolution = 32;
  double eigen_tol = 1e-8;
  int eigen_max_iterations = 500;

  // audit
  int audit_grid = 241;
  std::vector<double> audit_shells{5, 10, 20, 50, 100, 200, 400};
  std::vector<double> audit_ball_radii{5, 10, 20};
  int xi_samples = 160;

  // weyl
  std::optional<double> C_n, F_n;
  double weyl_alpha = 2.0;
  double weyl_lambda = 1.0;
  double weyl_xi = 0.0;
  int m_max = 6;
  double weyl_d0 = 8.0;
  double weyl_E = 8.0;

  // pohozaev
  double pohozaev_lambda = 1.0;
  std::string field = "gaussian";  // gaussian | constant | coordinate
  std::vector<double> field_center{0.5, 0.3, 0.2};
  double field_width = 1.2;
  double field_constant = 1.0;
  int field_coordinate = 0;
  double identity_radius = 3.0;
  std::vector<int> identity_levels{1, 2, 3};
  std::vector<double> absence_radii{1, 2, 4, 8};
  int absence_grid = 121;

  // bdgg
  int bdgg_m = 4;
  double bdgg_lambda = 0.0;  // 0 picks the midpoint of the admissible range
  double bdgg_B = 10.0;
  double bdgg_D = 10.0;
  double bdgg_R = 5.0;
  int bdgg_rings = 40;
  std::vector<double> probe_shells{0, 1, 2, 5, 10, 50, 200};
  int barrier_stride = 7;
  std::vector<double> gradient_h{1.25};

  std::string out = "minlap-out";
  bool export_mesh = false;
};

/// Missing keys keep their defaults; unknown keys and malformed values raise ConfigParse.
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);
/// Range checks on every numeric field; raises ConfigParse.
void validate(const RunConfig& c);

/// "a:b:count" (inclusive, evenly spaced) or "x,y,z".
std::vector<double> parse_list(const std::string& text);

/// Catalog spec for the configured surface, with unset truncation bounds
/// sized so that extrinsic balls of radius `needed` about the base fit.
SurfaceSpec surface_spec(const RunConfig& c, double needed);
BasePoint base_point(const RunConfig& c, const Immersion& imm);

struct Verdict {
  std::string name;
  std::string invariant;  // the property this verdict instantiates
  std::string status;     // pass | fail | info
  std::string detail;
  json resolution;        // sampling parameters the verdict rests on

  bool operator==(const Verdict&) const = default;
};

struct ReportEnvelope {
  std::string tool = "minlap";
  std::string version;
  std::string subcommand;
  std::string timestamp;
  json config;
  json payload;
  std::vector<Verdict> verdicts;

  json to_json() const;
  static ReportEnvelope from_json(const json& j);
  bool operator==(const ReportEnvelope&) const = default;
};

const char* tool_version();

/// Decimal text with 17 significant digits, independent of the locale.
std::string format_double(double x);

struct RunOutcome {
  ReportEnvelope envelope;
  int exit_code = 0;  // 0 all verdicts pass, 2 some verdict failed
  std::vector<std::string> files;
};

/// Runs one subcommand (volume, spectrum, weyl, audit, pohozaev, bdgg, all),
/// writing <out>/report.json and the CSV tables.
RunOutcome run(const std::string& subcommand, const RunConfig& config);

}  // namespace minlap
