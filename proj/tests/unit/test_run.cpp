#include "minlap/error.hpp"
#include "minlap/run.hpp"
#include "minlap/surfaces.hpp"

#include <doctest.h>

#include <cstdlib>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <locale>
#include <numbers>
#include <sstream>

using namespace minlap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("minlap_unit_" + name);
  fs::remove_all(p);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("list parsing") {
  CHECK(parse_list("1:10:10") == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(parse_list("0.5, 2,40") == std::vector<double>{0.5, 2, 40});
  CHECK(parse_list("3:3:1") == std::vector<double>{3});
  CHECK(code_of([] { parse_list("1:2"); }) == ErrorCode::ConfigParse);
  CHECK(code_of([] { parse_list("1:2:0"); }) == ErrorCode::ConfigParse);
  CHECK(code_of([] { parse_list("a,b"); }) == ErrorCode::ConfigParse);
}

TEST_CASE("config round trip and unknown keys") {
  RunConfig c;
  c.surface.kind = "catenoid";
  c.surface.t_max = 6.0;
  c.radii = {0.5, 1, 40};
  c.C_n = 7.0;
  const json j = config_to_json(c);
  CHECK(config_to_json(config_from_json(j)) == j);

  const json nested = json::parse(R"({"surface":{"kind":"catenoid","neck_radius":1.0,"truncation":{"t_max":6.0}}})");
  const RunConfig n = config_from_json(nested);
  CHECK(n.surface.kind == "catenoid");
  REQUIRE(n.surface.t_max.has_value());
  CHECK(*n.surface.t_max == 6.0);

  CHECK(code_of([] { config_from_json(json::parse(R"({"volume":{"radiuses":[1]}})")); }) == ErrorCode::ConfigParse);
  CHECK(code_of([] { config_from_json(json::parse(R"({"quadrature_level":"three"})")); }) == ErrorCode::ConfigParse);
  CHECK(config_from_json(json::parse(R"({"volume":{"radii":"1:4:4"}})")).radii == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("validation ranges") {
  const auto bad = [](const std::function<void(RunConfig&)>& edit) {
    RunConfig c;
    edit(c);
    return code_of([&] { validate(c); }) == ErrorCode::ConfigParse;
  };
  CHECK_NOTHROW(validate(RunConfig{}));
  CHECK(bad([](RunConfig& c) { c.surface.kind = "sphere"; }));
  CHECK(bad([](RunConfig& c) { c.radii = {2, 1, 3}; }));
  CHECK(bad([](RunConfig& c) { c.surface.kind = "catenoid"; c.surface.n = 3; }));
  CHECK(bad([](RunConfig& c) { c.weyl_alpha = 1.0; }));
  CHECK(bad([](RunConfig& c) { c.base.kind = "ambient"; c.base.point = {1, 2}; }));
  CHECK(bad([](RunConfig& c) { c.gradient_h = {3.0}; }));
  CHECK(bad([](RunConfig& c) { c.identity_levels = {2, 1}; }));
}

TEST_CASE("automatic truncation keeps the needed ball inside the chart") {
  RunConfig c;
  c.surface.kind = "catenoid";
  const SurfaceSpec s = surface_spec(c, 40.0);
  REQUIRE(s.truncation.t_max.has_value());
  CHECK(std::cosh(*s.truncation.t_max) > 40.0);
  c.surface.kind = "graph";
  c.surface.graph_family = "scherk";
  CHECK(*surface_spec(c, 40.0).truncation.radius < std::numbers::pi / 2);
  c.surface.kind = "helicoid";
  c.base.kind = "ambient";
  c.base.point = {3, 0, 0};
  const SurfaceSpec h = surface_spec(c, 5.0);
  CHECK(*h.truncation.radius >= 8.0);
  CHECK(*h.truncation.t_max >= 8.0);
}

TEST_CASE("doubles are written with 17 significant digits in any locale") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numbers::pi) == "3.1415926535897931");
  CHECK(format_double(1e-300) == "1e-300");
  for (double x : {0.1, 1.0 / 3, 6.02214076e23, -2.5e-310, 1.7976931348623157e308})
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  for (const char* name : {"de_DE.UTF-8", "fr_FR.UTF-8"}) {
    if (!std::setlocale(LC_ALL, name)) continue;
    CHECK(format_double(2.5) == "2.5");
    std::setlocale(LC_ALL, "C");
  }
}

TEST_CASE("report envelope round trip") {
  ReportEnvelope e;
  e.version = tool_version();
  e.subcommand = "volume";
  e.timestamp = "2026-01-01T00:00:00Z";
  e.config = config_to_json(RunConfig{});
  e.payload = {{"x", 1.25}, {"list", {1, 2, 3}}};
  e.verdicts.push_back({"v", "an invariant", "pass", "detail", {{"grid", 5}}});
  CHECK(ReportEnvelope::from_json(json::parse(e.to_json().dump())) == e);
  CHECK(code_of([] { ReportEnvelope::from_json(json::parse("{}")); }) == ErrorCode::ConfigParse);
}

TEST_CASE("volume run on the plane writes a report and a constant ratio column") {
  RunConfig c;
  c.radii = parse_list("1:10:10");
  c.out = scratch("volume").string();
  const RunOutcome out = run("volume", c);
  CHECK(out.exit_code == 0);
  const json report = read_json(fs::path(c.out) / "report.json");
  CHECK(ReportEnvelope::from_json(report) == out.envelope);
  CHECK(report["tool"] == "minlap");
  for (const auto& v : report["verdicts"]) {
    CHECK_FALSE(v["invariant"].get<std::string>().empty());
    CHECK(v["resolution"].is_object());
  }
  const auto rows = read_csv(fs::path(c.out) / "volume.csv");
  REQUIRE(rows.size() == 11);
  CHECK(rows[0][2] == "ratio");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][2]) == doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("identical configs give identical payloads") {
  RunConfig c;
  c.surface.kind = "catenoid";
  c.radii = {1, 2, 5};
  c.out = scratch("det_a").string();
  const RunOutcome a = run("volume", c);
  c.out = scratch("det_b").string();
  const RunOutcome b = run("volume", c);
  CHECK(a.envelope.payload.dump() == b.envelope.payload.dump());
  CHECK(a.envelope.verdicts == b.envelope.verdicts);
}

TEST_CASE("a failing verdict gives exit code 2") {
  RunConfig c;
  c.surface.kind = "catenoid";
  c.base.kind = "surface";
  c.base.point = {0.0, 0.0};
  c.audit_grid = 61;
  c.audit_shells = {1, 2, 4};
  c.audit_ball_radii = {1};
  c.xi_samples = 20;
  c.out = scratch("fail").string();
  const RunOutcome out = run("audit", c);
  CHECK(out.exit_code == 2);
  bool found = false;
  for (const auto& v : out.envelope.verdicts)
    if (v.name == "decay_bound") found = v.status == "fail";
  CHECK(found);
}

TEST_CASE("unknown subcommand and unwritable output are errors") {
  RunConfig c;
  c.out = scratch("unknown").string();
  CHECK_THROWS_AS(run("frobnicate", c), Error);
  const fs::path file = scratch("file_as_dir");
  std::ofstream(file.string()) << "x";
  c.out = (file / "sub").string();
  CHECK_THROWS_AS(run("volume", c), Error);
}
