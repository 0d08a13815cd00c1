#include "minlap/run.hpp"

#include "minlap/bdgg.hpp"
#include "minlap/diagnostics.hpp"
#include "minlap/eigensolve.hpp"
#include "minlap/error.hpp"
#include "minlap/meshing.hpp"
#include "minlap/pohozaev.hpp"
#include "minlap/weyl.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace minlap {

namespace fs = std::filesystem;

const char* tool_version() { return "0.3.0"; }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

[[noreturn]] void parse_error(const std::string& what) { fail(ErrorCode::ConfigParse, what); }

/// Reads the keys of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) parse_error(where_ + " must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) parse_error("unknown key '" + where_ + it.key() + "'");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      parse_error("malformed value for '" + where_ + key + "'");
    }
  }
  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      parse_error("malformed value for '" + where_ + key + "'");
    }
  }
  /// Lists may also be given as "a:b:count" or "x,y,z" strings.
  void list(const std::string& key, std::vector<double>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (v.is_string()) {
      out = parse_list(v.get<std::string>());
      return;
    }
    try {
      out = v.get<std::vector<double>>();
    } catch (const json::exception&) {
      parse_error("malformed list for '" + where_ + key + "'");
    }
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  Section sub(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, where_ + key + ".");
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

double parse_number(const std::string& s) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) parse_error("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) parse_error("range must read start:stop:count");
    const double a = parse_number(parts[0]), b = parse_number(parts[1]), c = parse_number(parts[2]);
    if (c < 1 || c != std::floor(c)) parse_error("range count must be a positive integer");
    const int count = static_cast<int>(c);
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) parse_error("empty list");
  return out;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section root(j, "");
  {
    Section s = root.sub("surface");
    s.get("kind", c.surface.kind);
    s.get("n", c.surface.n);
    s.get("radius", c.surface.radius);
    s.get("t_max", c.surface.t_max);
    {
      Section t = s.sub("truncation");
      t.get("radius", c.surface.radius);
      t.get("t_max", c.surface.t_max);
    }
    s.get("neck_radius", c.surface.neck_radius);
    s.get("pitch", c.surface.pitch);
    s.get("graph_family", c.surface.graph_family);
    s.list("coefficients", c.surface.coefficients);
    s.get("offset", c.surface.offset);
  }
  {
    Section s = root.sub("base");
    s.get("kind", c.base.kind);
    s.list("point", c.base.point);
  }
  root.get("quadrature_level", c.quadrature_level);
  {
    Section s = root.sub("volume");
    s.list("radii", c.radii);
    s.list("small_radii", c.small_radii);
  }
  {
    Section s = root.sub("spectrum");
    s.list("radii", c.spectrum_radii);
    s.get("resolution", c.mesh_resolution);
    s.get("tol", c.eigen_tol);
    s.get("max_iterations", c.eigen_max_iterations);
  }
  {
    Section s = root.sub("audit");
    s.get("grid", c.audit_grid);
    s.list("shells", c.audit_shells);
    s.list("ball_radii", c.audit_ball_radii);
    s.get("xi_samples", c.xi_samples);
  }
  {
    Section s = root.sub("weyl");
    s.get("C_n", c.C_n);
    s.get("F_n", c.F_n);
    s.get("alpha", c.weyl_alpha);
    s.get("lambda", c.weyl_lambda);
    s.get("xi", c.weyl_xi);
    s.get("m_max", c.m_max);
    s.get("d0", c.weyl_d0);
    s.get("E", c.weyl_E);
  }
  {
    Section s = root.sub("pohozaev");
    s.get("lambda", c.pohozaev_lambda);
    s.get("field", c.field);
    s.list("field_center", c.field_center);
    s.get("field_width", c.field_width);
    s.get("field_constant", c.field_constant);
    s.get("field_coordinate", c.field_coordinate);
    s.get("identity_radius", c.identity_radius);
    s.get("identity_levels", c.identity_levels);
    s.list("absence_radii", c.absence_radii);
    s.get("absence_grid", c.absence_grid);
  }
  {
    Section s = root.sub("bdgg");
    s.get("m", c.bdgg_m);
    s.get("lambda", c.bdgg_lambda);
    s.get("B", c.bdgg_B);
    s.get("D", c.bdgg_D);
    s.get("R", c.bdgg_R);
    s.get("rings", c.bdgg_rings);
    s.list("probe_shells", c.probe_shells);
    s.get("barrier_stride", c.barrier_stride);
    s.list("gradient_h", c.gradient_h);
  }
  root.get("out", c.out);
  root.get("export_mesh", c.export_mesh);
  return c;
}

json config_to_json(const RunConfig& c) {
  const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["surface"] = {{"kind", c.surface.kind},
                  {"n", c.surface.n},
                  {"truncation", {{"radius", opt(c.surface.radius)}, {"t_max", opt(c.surface.t_max)}}},
                  {"neck_radius", c.surface.neck_radius},
                  {"pitch", c.surface.pitch},
                  {"graph_family", c.surface.graph_family},
                  {"coefficients", c.surface.coefficients},
                  {"offset", c.surface.offset}};
  j["base"] = {{"kind", c.base.kind}, {"point", c.base.point}};
  j["quadrature_level"] = c.quadrature_level;
  j["volume"] = {{"radii", c.radii}, {"small_radii", c.small_radii}};
  j["spectrum"] = {{"radii", c.spectrum_radii},
                   {"resolution", c.mesh_resolution},
                   {"tol", c.eigen_tol},
                   {"max_iterations", c.eigen_max_iterations}};
  j["audit"] = {{"grid", c.audit_grid},
                {"shells", c.audit_shells},
                {"ball_radii", c.audit_ball_radii},
                {"xi_samples", c.xi_samples}};
  j["weyl"] = {{"C_n", opt(c.C_n)},       {"F_n", opt(c.F_n)},   {"alpha", c.weyl_alpha},
               {"lambda", c.weyl_lambda}, {"xi", c.weyl_xi},     {"m_max", c.m_max},
               {"d0", c.weyl_d0},         {"E", c.weyl_E}};
  j["pohozaev"] = {{"lambda", c.pohozaev_lambda},
                   {"field", c.field},
                   {"field_center", c.field_center},
                   {"field_width", c.field_width},
                   {"field_constant", c.field_constant},
                   {"field_coordinate", c.field_coordinate},
                   {"identity_radius", c.identity_radius},
                   {"identity_levels", c.identity_levels},
                   {"absence_radii", c.absence_radii},
                   {"absence_grid", c.absence_grid}};
  j["bdgg"] = {{"m", c.bdgg_m},
               {"lambda", c.bdgg_lambda},
               {"B", c.bdgg_B},
               {"D", c.bdgg_D},
               {"R", c.bdgg_R},
               {"rings", c.bdgg_rings},
               {"probe_shells", c.probe_shells},
               {"barrier_stride", c.barrier_stride},
               {"gradient_h", c.gradient_h}};
  j["out"] = c.out;
  j["export_mesh"] = c.export_mesh;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    parse_error("invalid JSON in '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

namespace {

void check_positive_ascending(const std::vector<double>& v, const std::string& what, std::size_t min_size = 1) {
  if (v.size() < min_size) parse_error(what + " needs at least " + std::to_string(min_size) + " entries");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(std::isfinite(v[i]) && v[i] > 0)) parse_error(what + " must be positive");
    if (i > 0 && !(v[i] > v[i - 1])) parse_error(what + " must be ascending");
  }
}

}  // namespace

void validate(const RunConfig& c) {
  const auto need = [](bool ok, const std::string& what) {
    if (!ok) parse_error(what);
  };
  static const std::set<std::string> kinds{"plane", "graph", "catenoid", "helicoid"};
  need(kinds.count(c.surface.kind) > 0, "surface.kind must be plane, graph, catenoid or helicoid");
  need(c.surface.n >= 2 && c.surface.n <= 8, "surface.n must lie in [2, 8]");
  need(c.surface.kind == "plane" || c.surface.kind == "graph" || c.surface.n == 2,
       "catenoid and helicoid are two-dimensional");
  need(!c.surface.radius || *c.surface.radius > 0, "surface.radius must be positive");
  need(!c.surface.t_max || *c.surface.t_max > 0, "surface.t_max must be positive");
  need(c.surface.neck_radius > 0 && c.surface.pitch > 0, "neck_radius and pitch must be positive");
  static const std::set<std::string> bases{"origin", "ambient", "surface"};
  need(bases.count(c.base.kind) > 0, "base.kind must be origin, ambient or surface");
  if (c.base.kind == "ambient")
    need(static_cast<int>(c.base.point.size()) == c.surface.n + 1, "ambient base needs n+1 coordinates");
  if (c.base.kind == "surface")
    need(static_cast<int>(c.base.point.size()) == c.surface.n, "surface base needs n chart coordinates");
  need(c.quadrature_level >= 0 && c.quadrature_level <= 6, "quadrature_level must lie in [0, 6]");
  check_positive_ascending(c.radii, "volume.radii", 3);
  check_positive_ascending(std::vector<double>(c.small_radii.rbegin(), c.small_radii.rend()), "volume.small_radii "
                           "(descending)");
  check_positive_ascending(c.spectrum_radii, "spectrum.radii");
  need(c.mesh_resolution >= 4 && c.mesh_resolution <= 400, "spectrum.resolution must lie in [4, 400]");
  need(c.eigen_tol > 0 && c.eigen_tol < 1, "spectrum.tol must lie in (0, 1)");
  need(c.eigen_max_iterations >= 1, "spectrum.max_iterations must be positive");
  need(c.audit_grid >= 3 && c.audit_grid <= 4001, "audit.grid must lie in [3, 4001]");
  check_positive_ascending(c.audit_shells, "audit.shells", 2);
  check_positive_ascending(c.audit_ball_radii, "audit.ball_radii");
  need(c.xi_samples >= 4, "audit.xi_samples must be at least 4");
  need(!c.C_n || *c.C_n > 0, "weyl.C_n must be positive");
  need(!c.F_n || *c.F_n > 0, "weyl.F_n must be positive");
  need(c.weyl_alpha > 1, "weyl.alpha must exceed 1");
  need(c.weyl_lambda > 0, "weyl.lambda must be positive");
  need(c.weyl_xi >= 0 && c.weyl_xi <= 1, "weyl.xi must lie in [0, 1]");
  need(c.m_max >= 1 && c.m_max <= 64, "weyl.m_max must lie in [1, 64]");
  need(c.weyl_d0 > 0 && c.weyl_E > 0, "weyl.d0 and weyl.E must be positive");
  static const std::set<std::string> fields{"gaussian", "constant", "coordinate"};
  need(fields.count(c.field) > 0, "pohozaev.field must be gaussian, constant or coordinate");
  if (c.field == "gaussian")
    need(static_cast<int>(c.field_center.size()) == c.surface.n + 1 && c.field_width > 0,
         "gaussian field needs n+1 center coordinates and a positive width");
  if (c.field == "coordinate")
    need(c.field_coordinate >= 0 && c.field_coordinate <= c.surface.n, "field_coordinate out of range");
  need(c.identity_radius > 0, "pohozaev.identity_radius must be positive");
  need(!c.identity_levels.empty(), "pohozaev.identity_levels must not be empty");
  for (std::size_t i = 0; i < c.identity_levels.size(); ++i)
    need(c.identity_levels[i] >= 0 && c.identity_levels[i] <= 6 &&
             (i == 0 || c.identity_levels[i] > c.identity_levels[i - 1]),
         "pohozaev.identity_levels must be ascending in [0, 6]");
  check_positive_ascending(c.absence_radii, "pohozaev.absence_radii");
  need(c.absence_grid >= 3, "pohozaev.absence_grid must be at least 3");
  need(c.bdgg_m >= 2 && c.bdgg_m <= 32, "bdgg.m must lie in [2, 32]");
  need(c.bdgg_lambda >= 0, "bdgg.lambda must be nonnegative");
  need(c.bdgg_B > 0 && c.bdgg_D > 0, "bdgg.B and bdgg.D must be positive");
  need(c.bdgg_R > 0, "bdgg.R must be positive");
  need(c.bdgg_rings >= 2 && c.bdgg_rings <= 1000, "bdgg.rings must lie in [2, 1000]");
  need(c.probe_shells.size() >= 2, "bdgg.probe_shells needs two edges");
  need(c.barrier_stride >= 1, "bdgg.barrier_stride must be positive");
  for (double h : c.gradient_h) need(h > 0 && 2 * h <= c.bdgg_R, "bdgg.gradient_h needs 0 < 2h <= R");
  need(!c.out.empty(), "out must not be empty");
}

// ---------------------------------------------------------------------------
// Surface and base

namespace {

SurfaceSpec build_spec(const SurfaceConfig& s, double radius, double t_max) {
  if (s.kind == "plane") return SurfaceSpec::plane(s.n, radius);
  if (s.kind == "graph") {
    GraphFunctionSpec g = GraphFunctionSpec::from_family(s.graph_family, s.n, s.coefficients, s.offset);
    if (std::isfinite(g.max_chart_radius)) radius = std::min(radius, 0.98 * g.max_chart_radius);
    return SurfaceSpec::graph_of(std::move(g), radius);
  }
  if (s.kind == "catenoid") return SurfaceSpec::catenoid(s.neck_radius, t_max);
  if (s.kind == "helicoid") return SurfaceSpec::helicoid(s.pitch, radius, t_max);
  fail(ErrorCode::UnsupportedKind, "unknown surface kind '" + s.kind + "'");
}

/// |a| for the configured base; surface bases are pushed through a chart just large enough to hold them.
double base_offset(const RunConfig& c) {
  if (c.base.kind == "origin") return 0;
  double q = 0;
  for (double x : c.base.point) q = std::max(q, std::abs(x));
  const Vec p = Eigen::Map<const Vec>(c.base.point.data(), static_cast<Eigen::Index>(c.base.point.size()));
  if (c.base.kind == "ambient") return p.norm();
  const SurfaceConfig& s = c.surface;
  const double reach = s.kind == "plane" || s.kind == "graph" ? p.norm() + 1 : q + 1;
  const Immersion imm = make_immersion(build_spec(s, s.radius.value_or(reach), s.t_max.value_or(reach)));
  require(imm.domain.contains(p), ErrorCode::InvalidArgument, "surface base lies outside the chart");
  return imm.point(p).norm();
}

}  // namespace

SurfaceSpec surface_spec(const RunConfig& c, double needed) {
  const SurfaceConfig& s = c.surface;
  const double reach = needed + base_offset(c);
  double radius = 1.05 * reach + 0.5, t_max = 0;
  if (s.kind == "catenoid") {
    // |F| >= c cosh(t/c), so the ball of radius `reach` about the origin stays in |t| <= c acosh(reach/c).
    const double cr = s.neck_radius;
    t_max = cr * std::acosh(std::max(1.0, reach / cr)) + 0.5 * cr;
  } else if (s.kind == "helicoid") {
    t_max = 1.05 * reach / s.pitch + 0.5;
  }
  SurfaceSpec spec = build_spec(s, s.radius.value_or(radius), s.t_max.value_or(t_max));
  spec.validate();
  return spec;
}

BasePoint base_point(const RunConfig& c, const Immersion& imm) {
  if (c.base.kind == "origin") return BasePoint::ambient_point(Vec::Zero(imm.dim + 1));
  const Vec p = Eigen::Map<const Vec>(c.base.point.data(), static_cast<Eigen::Index>(c.base.point.size()));
  if (c.base.kind == "ambient") return BasePoint::ambient_point(p);
  require(imm.domain.contains(p), ErrorCode::InvalidArgument, "surface base lies outside the chart");
  return BasePoint::surface_point(imm, p);
}

// ---------------------------------------------------------------------------
// Envelope

json ReportEnvelope::to_json() const {
  json j;
  j["tool"] = tool;
  j["version"] = version;
  j["subcommand"] = subcommand;
  j["timestamp"] = timestamp;
  j["config"] = config;
  j["payload"] = payload;
  json v = json::array();
  for (const auto& x : verdicts)
    v.push_back({{"name", x.name},
                 {"invariant", x.invariant},
                 {"status", x.status},
                 {"detail", x.detail},
                 {"resolution", x.resolution}});
  j["verdicts"] = v;
  return j;
}

ReportEnvelope ReportEnvelope::from_json(const json& j) {
  ReportEnvelope e;
  try {
    e.tool = j.at("tool").get<std::string>();
    e.version = j.at("version").get<std::string>();
    e.subcommand = j.at("subcommand").get<std::string>();
    e.timestamp = j.at("timestamp").get<std::string>();
    e.config = j.at("config");
    e.payload = j.at("payload");
    for (const auto& v : j.at("verdicts"))
      e.verdicts.push_back({v.at("name").get<std::string>(), v.at("invariant").get<std::string>(),
                            v.at("status").get<std::string>(), v.at("detail").get<std::string>(),
                            v.at("resolution")});
  } catch (const json::exception& ex) {
    parse_error(std::string("malformed report envelope: ") + ex.what());
  }
  return e;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) fail(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    line(header);
  }
  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(format_double(v));
    line(cells);
  }
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct Context {
  const RunConfig& cfg;
  fs::path dir;
  std::string prefix;  // verdict-name prefix used by `all`
  json payload = json::object();
  std::vector<Verdict> verdicts;
  std::vector<std::string> files;

  Csv csv(const std::string& name, const std::vector<std::string>& header) {
    files.push_back((dir / name).string());
    return Csv(dir / name, header);
  }
  void verdict(const std::string& name, const std::string& invariant, bool pass, const std::string& detail,
               json resolution) {
    verdicts.push_back({prefix + name, invariant, pass ? "pass" : "fail", detail, std::move(resolution)});
  }
  void info(const std::string& name, const std::string& invariant, const std::string& detail, json resolution) {
    verdicts.push_back({prefix + name, invariant, "info", detail, std::move(resolution)});
  }
};

std::string fmt(double x) { return format_double(x); }

void run_volume(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Immersion imm = make_immersion(surface_spec(c, c.radii.back()));
  const SurfaceSpec spec = surface_spec(c, c.radii.back());
  const BasePoint base = base_point(c, imm);
  const VolumeGrowthReport rep = volume_growth(imm, base, c.radii, c.quadrature_level);
  const double om = omega(rep.n);
  json p;
  p["base_convention"] = rep.base_convention;
  p["n"] = rep.n;
  p["quadrature_level"] = rep.quadrature_level;
  p["radii"] = nums(rep.radii);
  p["volumes"] = nums(rep.volumes);
  p["ratios"] = nums(rep.ratios);
  p["miranda_rhs"] = nums(rep.miranda_rhs);
  p["mu_partial"] = nums(rep.mu_partial);
  p["monotone"] = rep.monotone;
  p["C_n_estimate"] = num(rep.C_n_estimate);
  p["F_n_estimate"] = num(rep.F_n_estimate);
  p["ends_bound"] = rep.ends_bound;
  p["mu_estimate"] = num(rep.mu_estimate);
  p["brooks_bound"] = num(rep.brooks_bound);
  p["miranda_pass"] = rep.miranda_pass;
  p["exceeds_omega"] = rep.exceeds_omega;
  p["omega_n"] = num(om);
  {
    Csv csv = ctx.csv("volume.csv", {"r", "volume", "ratio", "ratio_over_omega", "miranda_rhs", "mu_partial"});
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
      csv.row({rep.radii[i], rep.volumes[i], rep.ratios[i], rep.ratios[i] / om, rep.miranda_rhs[i], rep.mu_partial[i]});
  }
  const json res = {{"quadrature_level", c.quadrature_level}, {"radii", nums(c.radii)}};
  ctx.verdict("volume_monotone", "V(r)/r^n nondecreasing within 1e-3 relative", rep.monotone,
              "ratios from " + fmt(rep.ratios.front()) + " to " + fmt(rep.ratios.back()), res);
  const bool graph = spec.kind == SurfaceSpec::Kind::Plane || spec.kind == SurfaceSpec::Kind::Graph;
  if (graph)
    ctx.verdict("miranda_bound", "V(r) <= ((n+1)^2/2) omega_{n+1} r^n on minimal graphs", rep.miranda_pass,
                "largest V/rhs " + fmt([&] {
                  double w = 0;
                  for (std::size_t i = 0; i < rep.volumes.size(); ++i) w = std::max(w, rep.volumes[i] / rep.miranda_rhs[i]);
                  return w;
                }()),
                res);
  ctx.info("volume_ratio_gap", "sup V/r^n exceeds omega_n when the surface is not a plane",
           rep.exceeds_omega ? "ratio exceeds omega_n (ends bound " + std::to_string(rep.ends_bound) + ")"
                             : "ratio within omega_n",
           res);
  if (base.on_surface && !c.small_radii.empty()) {
    const SmallRadiusReport sr = small_radius_limit(imm, base, c.small_radii, c.quadrature_level);
    p["small_radius"] = {{"eps", nums(sr.eps)}, {"values", nums(sr.values)},
                         {"nonincreasing_toward_one", sr.nonincreasing_toward_one}};
    Csv csv = ctx.csv("small_radius.csv", {"eps", "ratio"});
    for (std::size_t i = 0; i < sr.eps.size(); ++i) csv.row({sr.eps[i], sr.values[i]});
    bool in_range = true;
    for (double v : sr.values) in_range = in_range && v >= 1 - 1e-9 && v <= 1.02;
    ctx.verdict("small_radius_limit", "V(eps)/(omega_n eps^n) decreases to 1 at an embedded base point",
                in_range && sr.nonincreasing_toward_one, "last value " + fmt(sr.values.back()),
                {{"quadrature_level", c.quadrature_level}, {"eps", nums(c.small_radii)}});
  }
  ctx.payload["volume"] = p;
}

constexpr double kJ01Squared = 5.783185962946784;  // first Dirichlet eigenvalue of the unit disk

void run_spectrum(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Immersion imm = make_immersion(surface_spec(c, c.spectrum_radii.back()));
  const BasePoint base = base_point(c, imm);
  EigenOptions opt;
  opt.tol = c.eigen_tol;
  opt.max_iterations = c.eigen_max_iterations;
  const Lambda1Curve curve = lambda1_curve(imm, base, c.spectrum_radii, c.mesh_resolution, opt);
  json p;
  json rows = json::array();
  double worst = 0;
  {
    Csv csv = ctx.csv("spectrum.csv", {"r", "lambda1", "lambda1_r2", "vertices", "max_edge"});
    for (const auto& pt : curve.points) {
      const double scaled = pt.lambda1 * pt.r * pt.r;
      worst = std::max(worst, scaled);
      csv.row({pt.r, pt.lambda1, scaled, static_cast<double>(pt.vertices), pt.max_edge});
      rows.push_back({{"r", num(pt.r)},
                      {"lambda1", num(pt.lambda1)},
                      {"lambda1_r2", num(scaled)},
                      {"vertices", pt.vertices},
                      {"max_edge", num(pt.max_edge)}});
    }
  }
  p["base_convention"] = base_convention(base);
  p["resolution"] = c.mesh_resolution;
  p["points"] = rows;
  p["strictly_decreasing"] = curve.strictly_decreasing;
  p["plane_constant"] = kJ01Squared;
  const json res = {{"resolution", c.mesh_resolution}, {"radii", nums(c.spectrum_radii)}, {"tol", c.eigen_tol}};
  ctx.verdict("lambda1_decreasing", "Dirichlet lambda_1 of extrinsic balls strictly decreasing in r",
              curve.strictly_decreasing, "lambda_1 at largest r " + fmt(curve.points.back().lambda1), res);
  ctx.verdict("lambda1_scaled_bound", "lambda_1 r^2 bounded by the plane constant + 5%", worst <= 1.05 * kJ01Squared,
              "max lambda_1 r^2 " + fmt(worst), res);
  if (c.export_mesh)
    for (double r : c.spectrum_radii) {
      const TriMesh mesh = ball_mesh(imm, base, r, c.mesh_resolution);
      const std::string name = "mesh_r" + fmt(r) + ".off";
      write_off(mesh, (ctx.dir / name).string());
      ctx.files.push_back((ctx.dir / name).string());
    }
  ctx.payload["spectrum"] = p;
}

void run_weyl(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const int n = c.surface.n;
  const bool graph_like = c.surface.kind == "plane" || c.surface.kind == "graph";
  const double C_n = c.C_n.value_or(graph_like ? omega(n) : 2 * omega(n));
  const double F_n = c.F_n.value_or(omega(n));
  const WeylSchedule schedule = build_schedule(n, C_n, F_n, c.weyl_alpha, c.m_max, c.weyl_lambda, c.weyl_d0, c.weyl_E);
  const auto& last = schedule.rows.back();
  const Immersion imm = make_immersion(surface_spec(c, last.d / last.eps));
  const BasePoint base = base_point(c, imm);
  const WeylReport rep = weyl_run(imm, base, schedule, c.weyl_xi, c.quadrature_level);
  json rows = json::array();
  {
    Csv csv = ctx.csv("weyl.csv", {"m", "eps", "C_m", "mass", "T11", "B14", "T12", "B15", "T13", "B16",
                                   "residual_ratio"});
    for (const auto& r : rep.rows) {
      csv.row({static_cast<double>(r.m), r.eps, r.C, r.mass, r.T11, r.B14, r.T12, r.B15, r.T13, r.B16,
               r.residual_ratio});
      rows.push_back({{"m", r.m},         {"eps", num(r.eps)}, {"C_m", num(r.C)},       {"a", num(r.a)},
                      {"b", num(r.b)},    {"c", num(r.c)},     {"d", num(r.d)},         {"eta", num(r.eta)},
                      {"mass", num(r.mass)}, {"T11", num(r.T11)}, {"B14", num(r.B14)},  {"T12", num(r.T12)},
                      {"B15", num(r.B15)}, {"T13", num(r.T13)}, {"B16", num(r.B16)},    {"xi_sup", num(r.xi_sup)},
                      {"residual_ratio", num(r.residual_ratio)}, {"certified", num(r.certified)}});
    }
  }
  json p;
  p["base_convention"] = base_convention(base);
  p["schedule"] = {{"n", schedule.n},       {"C_n", num(schedule.C_n)}, {"F_n", num(schedule.F_n)},
                   {"alpha", num(schedule.alpha)}, {"theta", num(schedule.theta)}, {"tau", num(schedule.tau)},
                   {"E", num(schedule.E)},  {"d0", num(schedule.d0)}, {"lambda", num(schedule.lambda)}};
  p["xi"] = c.weyl_xi;
  p["rows"] = rows;
  p["mass_ok"] = rep.mass_ok;
  p["bounds_ok"] = rep.bounds_ok;
  p["ratio_decreasing"] = rep.ratio_decreasing;
  const double drop = rep.rows.front().residual_ratio / rep.rows.back().residual_ratio;
  p["ratio_drop"] = num(drop);
  const json res = {{"quadrature_level", c.quadrature_level}, {"m_max", c.m_max}};
  ctx.verdict("weyl_mass", "||u||^2 >= tau - 1e-2 on every annulus", rep.mass_ok,
              "tau " + fmt(schedule.tau) + ", smallest mass " + fmt([&] {
                double w = INFINITY;
                for (const auto& r : rep.rows) w = std::min(w, r.mass);
                return w;
              }()),
              res);
  ctx.verdict("weyl_term_bounds", "residual terms below their a priori bounds", rep.bounds_ok, "T11<=B14, T12<=B15, T13<=B16",
              res);
  ctx.verdict("weyl_ratio_decreasing", "residual ratio decreasing along the schedule", rep.ratio_decreasing,
              "drop factor " + fmt(drop), res);
  ctx.payload["weyl"] = p;
}

void run_audit(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double needed = std::max(c.audit_shells.back(), c.audit_ball_radii.back());
  const SurfaceSpec spec = surface_spec(c, needed);
  const Immersion imm = make_immersion(spec);
  const BasePoint base = base_point(c, imm);
  CurvatureSampling sampling;
  sampling.grid = c.audit_grid;
  sampling.shells = c.audit_shells;
  sampling.ball_radii = c.audit_ball_radii;
  sampling.quadrature_level = std::min(c.quadrature_level, 2);
  const GraphFunctionSpec* graph = spec.kind == SurfaceSpec::Kind::Graph && spec.graph ? &*spec.graph : nullptr;
  const CurvatureAudit audit = curvature_audit(imm, base, sampling, graph);
  const XiReport xi = xi_estimate(imm, base, c.audit_shells, c.xi_samples);

  json p;
  p["base_convention"] = audit.base_convention;
  p["grid"] = audit.grid;
  const auto& d = audit.decay_bound;
  json eq = json::array();
  for (const auto& q : d.equality_points) eq.push_back(vec_json(q));
  p["decay_bound"] = {{"verdict", d.label()},
                      {"sup", num(d.sup)},
                      {"sup_point", vec_json(d.sup_point)},
                      {"sup_r_tilde", num(d.sup_r_tilde)},
                      {"strict_witness", d.strict_witness ? vec_json(*d.strict_witness) : json(nullptr)},
                      {"strict_witness_value", num(d.strict_witness_value)},
                      {"equality_points", eq}};
  json shells = json::array();
  {
    Csv csv = ctx.csv("audit_shells.csv",
                      {"r_lo", "r_hi", "count", "sup_scaled_A", "tail_sup_scaled_A", "xi_inf", "xi_sup"});
    for (const auto& s : audit.shells) {
      csv.row({s.r_lo, s.r_hi, static_cast<double>(s.count), s.sup_scaled_A, s.tail_sup_scaled_A, s.xi_inf, s.xi_sup});
      shells.push_back({{"r_lo", num(s.r_lo)}, {"r_hi", num(s.r_hi)}, {"count", s.count},
                        {"sup_scaled_A", num(s.sup_scaled_A)}, {"tail_sup_scaled_A", num(s.tail_sup_scaled_A)},
                        {"xi_inf", num(s.xi_inf)}, {"xi_sup", num(s.xi_sup)}});
    }
  }
  p["scaled_curvature_trend"] = shells;
  p["estimators_agree"] = audit.estimators_agree;
  p["total_curvature"] = num(audit.total_curvature);
  json a2 = json::array();
  {
    Csv csv = ctx.csv("audit_A2.csv", {"r", "A2_ratio"});
    for (const auto& [r, v] : audit.A2_ratio) {
      csv.row({r, v});
      a2.push_back({num(r), num(v)});
    }
  }
  p["A2_ratio"] = a2;
  if (audit.graph_hessian_bound) {
    const auto& g = *audit.graph_hessian_bound;
    p["graph_hessian_bound"] = {{"pass", g.pass}, {"worst_ratio", num(g.worst_ratio)},
                                {"worst_point", vec_json(g.worst_point)}};
  }
  json xs = json::array();
  {
    Csv csv = ctx.csv("xi.csv", {"radius", "count", "xi_inf", "xi_sup"});
    for (const auto& s : xi.shells) {
      csv.row({s.radius, static_cast<double>(s.count), s.inf, s.sup});
      xs.push_back({{"radius", num(s.radius)}, {"count", s.count}, {"inf", num(s.inf)}, {"sup", num(s.sup)}});
    }
  }
  p["xi"] = {{"shells", xs}, {"converged", xi.converged}, {"limit_estimate", num(xi.limit_estimate)}};

  const json res = {{"grid", c.audit_grid}, {"shells", nums(c.audit_shells)}};
  std::string detail = d.label() + ", sup r|kappa| = " + fmt(d.sup) + " at r = " + fmt(d.sup_r_tilde);
  if (d.kind == DecayBoundVerdict::Kind::PassEqualityOnlyAt)
    detail += ", equality at " + std::to_string(d.equality_points.size()) + " samples";
  ctx.verdict("decay_bound", "r|kappa| <= 1 with strict inequality somewhere", d.kind != DecayBoundVerdict::Kind::Fail,
              detail, res);
  if (audit.graph_hessian_bound)
    ctx.verdict("graph_hessian_bound", "|D2f(X,X)|^2 (|x|^2+f^2) <= 1+|Df|^2", audit.graph_hessian_bound->pass,
                "worst ratio " + fmt(audit.graph_hessian_bound->worst_ratio), res);
  ctx.info("scaled_curvature_trend", "shell and tail estimators of r||A|| share one limit",
           audit.estimators_agree ? "estimators agree" : "estimators disagree", res);
  ctx.info("normal_component_limit", "bands of |dr(nu)| settle on the outer shells",
           (xi.converged ? "settled near " : "not settled; last band midpoint ") + fmt(xi.limit_estimate),
           {{"samples_per_shell", c.xi_samples}, {"shells", nums(c.audit_shells)}});
  if (spec.kind == SurfaceSpec::Kind::Catenoid) {
    std::vector<double> ts;
    for (int i = 0; i <= 200; ++i) ts.push_back(i * 0.05);
    const auto ineq = catenoid_inequalities(ts);
    p["catenoid_inequalities"] = {{"strict_for_positive_t", ineq.strict_for_positive_t},
                                  {"equality_only_at_zero", ineq.equality_only_at_zero}};
    ctx.verdict("catenoid_inequalities", "t <= sinh t cosh t and sinh t <= t cosh t, equality only at t = 0",
                ineq.strict_for_positive_t && ineq.equality_only_at_zero, "t in [0, 10], step 0.05",
                {{"t_samples", ts.size()}});
  }
  ctx.payload["audit"] = p;
}

AmbientField make_field(const RunConfig& c) {
  const int dim = c.surface.n + 1;
  if (c.field == "constant") return AmbientField::constant(c.field_constant, dim);
  if (c.field == "coordinate") return AmbientField::coordinate(c.field_coordinate, dim);
  const Vec center = Eigen::Map<const Vec>(c.field_center.data(), dim);
  return AmbientField::gaussian(center, c.field_width);
}

/// Quadrature tolerance the identity residual is held to at a level.
double identity_tolerance(int level) { return 1e-4 * std::pow(4.0, -level); }

void run_pohozaev(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double needed = std::max(c.identity_radius, c.absence_radii.back());
  const Immersion imm = make_immersion(surface_spec(c, needed));
  const BasePoint base = base_point(c, imm);
  const AmbientField u = make_field(c);
  const double lambda = c.pohozaev_lambda;

  json p;
  p["base_convention"] = base_convention(base);
  json reps = json::array();
  const IdentityDomain domain = IdentityDomain::ball(c.identity_radius);
  std::vector<IdentityReport> reports;
  {
    Csv csv = ctx.csv("pohozaev_identity.csv", {"level", "max_depth", "energy_term", "hessian_term", "equation_term",
                                                "boundary_energy_term", "boundary_gradient_term", "lhs", "rhs",
                                                "residual"});
    for (int level : c.identity_levels) {
      const IdentityReport r = identity_residual(imm, domain, u, base, lambda, level);
      reports.push_back(r);
      csv.row({static_cast<double>(level), static_cast<double>(r.max_depth), r.lhs_terms[0], r.lhs_terms[1],
               r.lhs_terms[2], r.rhs_terms[0], r.rhs_terms[1], r.lhs, r.rhs, r.residual});
      reps.push_back({{"level", level},
                      {"max_depth", r.max_depth},
                      {"domain", r.domain},
                      {"lhs_terms", {num(r.lhs_terms[0]), num(r.lhs_terms[1]), num(r.lhs_terms[2])}},
                      {"rhs_terms", {num(r.rhs_terms[0]), num(r.rhs_terms[1])}},
                      {"lhs", num(r.lhs)},
                      {"rhs", num(r.rhs)},
                      {"residual", num(r.residual)}});
    }
  }
  p["identity"] = reps;
  const IdentityReport& fine = reports.back();
  const double scale = 1 + std::abs(fine.lhs_terms[0]) + std::abs(fine.lhs_terms[1]) + std::abs(fine.lhs_terms[2]);
  const json res = {{"levels", c.identity_levels}, {"radius", c.identity_radius}};
  ctx.verdict("identity_residual", "|LHS - RHS| <= 1e-4 * 4^-level * scale at the finest level",
              fine.residual <= identity_tolerance(c.identity_levels.back()) * scale,
              "residual " + fmt(fine.residual) + " at level " + std::to_string(c.identity_levels.back()), res);
  if (reports.size() >= 2) {
    double min_order = INFINITY;
    bool roundoff = false;
    for (std::size_t i = 1; i < reports.size(); ++i) {
      const double prev = reports[i - 1].residual, cur = reports[i].residual;
      // Pairs already at round-off carry no convergence information.
      if (prev <= 1e-12 * scale) {
        roundoff = true;
        continue;
      }
      const double order = std::log2(prev / std::max(cur, 1e-300)) / (c.identity_levels[i] - c.identity_levels[i - 1]);
      min_order = std::min(min_order, order);
    }
    p["min_order"] = num(min_order);
    ctx.verdict("identity_convergence", "identity residual converges at order >= 2 under refinement",
                min_order >= 2, "observed order " + fmt(min_order) + (roundoff ? " (round-off reached)" : ""), res);
  }

  const AbsenceAudit audit = absence_audit(imm, base, u, lambda, c.absence_radii, c.absence_grid, c.quadrature_level);
  json rows = json::array();
  {
    Csv csv = ctx.csv("absence.csv", {"r", "hessian_integral", "dirichlet_energy", "boundary_u2_term",
                                      "boundary_energy_term", "boundary_gradient_term", "boundary_sum",
                                      "boundary_energy"});
    for (const auto& r : audit.rows) {
      csv.row({r.r, r.hessian_integral, r.dirichlet_energy, r.boundary_terms[0], r.boundary_terms[1],
               r.boundary_terms[2], r.boundary_sum, r.boundary_energy});
      rows.push_back({{"r", num(r.r)},
                      {"hessian_integral", num(r.hessian_integral)},
                      {"dirichlet_energy", num(r.dirichlet_energy)},
                      {"boundary_terms", {num(r.boundary_terms[0]), num(r.boundary_terms[1]), num(r.boundary_terms[2])}},
                      {"boundary_sum", num(r.boundary_sum)},
                      {"boundary_energy", num(r.boundary_energy)}});
    }
  }
  json sparse = {{"integrable", audit.sparse_integrable},
                 {"found", audit.sparse.found},
                 {"t", nums(audit.sparse.t)},
                 {"t_phi", nums(audit.sparse.t_phi)}};
  p["absence"] = {{"grid", audit.grid},
                  {"min_hessian_eigenvalue", num(audit.min_hessian_eigenvalue)},
                  {"min_point", vec_json(audit.min_point)},
                  {"strict_witness", audit.strict_witness},
                  {"witness_point", vec_json(audit.witness_point)},
                  {"witness_value", num(audit.witness_value)},
                  {"rows", rows},
                  {"sparse_sequence", sparse},
                  {"integral_bounded_away", audit.integral_bounded_away},
                  {"verdict", audit.verdict}};
  ctx.verdict("hessian_convexity", "Hess h >= 0 on the samples with a strict-positivity witness",
              audit.verdict == "consistent_no_eigenfunction",
              audit.verdict + ", min eigenvalue " + fmt(audit.min_hessian_eigenvalue),
              {{"grid", c.absence_grid}, {"radii", nums(c.absence_radii)}});
  ctx.payload["pohozaev"] = p;
}

void run_bdgg(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const bdgg::Params prm = bdgg::params(c.bdgg_m, c.bdgg_lambda, c.bdgg_B, c.bdgg_D);
  json p;
  p["params"] = {{"m", prm.m},
                 {"p", prm.p},
                 {"delta", num(prm.delta)},
                 {"alpha", num(prm.alpha)},
                 {"lambda_range", {num(prm.lambda_lo), num(prm.lambda_hi)}},
                 {"lambda", num(prm.lambda)},
                 {"B", num(prm.B)},
                 {"D", num(prm.D)},
                 {"valid", prm.valid}};
  const json pres = {{"m", c.bdgg_m}};
  ctx.verdict("bdgg_params", "delta >= 0, alpha > 1 and a nonempty exponent range", prm.valid,
              "delta " + fmt(prm.delta) + ", alpha " + fmt(prm.alpha), pres);
  if (!prm.valid) {
    ctx.payload["bdgg"] = p;
    return;
  }
  // Profile checks on a grid.
  bool monotone_bound = true, odd = true;
  {
    Csv csv = ctx.csv("bdgg_profile.csv", {"z", "P"});
    for (int i = 0; i <= 20; ++i) {
      const double z = 0.25 * i;
      const double Pz = bdgg::P(z, prm), Pm = bdgg::P(-z, prm);
      monotone_bound = monotone_bound && Pz >= z;
      odd = odd && Pm == -Pz;
      csv.row({z, Pz});
    }
  }
  const double I0 = bdgg::inner_integral(0, prm), I0_closed = bdgg::inner_integral_at_zero(prm);
  p["inner_integral_at_zero"] = {{"quadrature", num(I0)}, {"closed_form", num(I0_closed)}};
  const json gres = {{"z_grid", "0:5:21"}};
  ctx.verdict("profile_bound", "P(z) >= z for z >= 0 and P odd", monotone_bound && odd, "21 grid points", gres);
  ctx.verdict("inner_integral", "inner integral at 0 matches its closed form to 1e-9",
              std::abs(I0 - I0_closed) <= 1e-9 * I0_closed, "quadrature " + fmt(I0) + ", closed " + fmt(I0_closed),
              gres);
  double axis = 0;
  for (double uu : {0.5, 1.0, 2.0, 5.0, 10.0})
    axis = std::max(axis, std::abs(bdgg::f1_uv(uu, 0, prm) / std::pow(uu, 2 * prm.alpha) - 1));
  ctx.verdict("f1_axis_growth", "f1/|x|^(2 alpha) = 1 on the u-axis", axis <= 4e-16, "max deviation " + fmt(axis),
              {{"u", {0.5, 1, 2, 5, 10}}});

  const bdgg::ReducedSolution sol = bdgg::solve_reduced_mse(prm, c.bdgg_R, c.bdgg_rings);
  {
    Csv csv = ctx.csv("bdgg_solution.csv", {"u", "v", "f"});
    for (std::size_t i = 0; i < sol.f.size(); ++i) csv.row({sol.mesh.points[i][0], sol.mesh.points[i][1], sol.f[i]});
  }
  p["solution"] = {{"R", num(c.bdgg_R)},
                   {"rings", c.bdgg_rings},
                   {"vertices", sol.f.size()},
                   {"newton_iterations", sol.newton_iterations},
                   {"residual_norm", num(sol.residual_norm)},
                   {"initial_residual", num(sol.initial_residual)},
                   {"antisymmetry", num(sol.antisymmetry)},
                   {"diagonal_max", num(sol.diagonal_max)},
                   {"boundary_data", sol.boundary_data}};
  const json sres = {{"R", num(c.bdgg_R)}, {"rings", c.bdgg_rings}};
  ctx.verdict("reduced_antisymmetry", "f(u,v) = -f(v,u) to 1e-8 and f = 0 on u = v",
              sol.antisymmetry <= 1e-8 && sol.diagonal_max <= 1e-8,
              "antisymmetry " + fmt(sol.antisymmetry) + ", diagonal " + fmt(sol.diagonal_max), sres);

  const bdgg::BarrierReport br = bdgg::barrier_ordering(sol, prm, c.barrier_stride);
  {
    Csv csv = ctx.csv("bdgg_barrier.csv", {"u", "v", "f1", "f", "f2"});
    for (const auto& r : br.rows) csv.row({r.u, r.v, r.f1, r.f, r.f2});
  }
  p["barrier"] = {{"samples", br.samples},
                  {"lower_violations", br.lower_violations},
                  {"upper_violations", br.upper_violations},
                  {"worst_lower", num(br.worst_lower)},
                  {"worst_upper", num(br.worst_upper)}};
  ctx.info("barrier_ordering", "|f1| <= |f| <= |f2| for the limit graph; soft check at finite R",
           std::to_string(br.lower_violations) + " lower and " + std::to_string(br.upper_violations) +
               " upper violations over " + std::to_string(br.samples) + " nodes",
           {{"stride", c.barrier_stride}, {"R", num(c.bdgg_R)}, {"rings", c.bdgg_rings}});
  if (!c.gradient_h.empty()) {
    const auto grad = bdgg::gradient_estimate(sol, prm, c.gradient_h);
    json g = json::array();
    Csv csv = ctx.csv("bdgg_gradient.csv", {"h", "max_grad", "f2_argument"});
    for (const auto& r : grad) {
      csv.row({r.h, r.max_grad, r.f2_argument});
      g.push_back({{"h", num(r.h)}, {"max_grad", num(r.max_grad)}, {"f2_argument", num(r.f2_argument)}});
    }
    p["gradient_estimate"] = g;
  }
  const auto probe = bdgg::normal_alignment_probe(sol, c.probe_shells);
  json pr = json::array();
  {
    Csv csv = ctx.csv("bdgg_probe.csv", {"r_lo", "r_hi", "count", "xi_min", "xi_max"});
    for (const auto& s : probe) {
      csv.row({s.r_lo, s.r_hi, static_cast<double>(s.count), s.xi_min, s.xi_max});
      pr.push_back({{"r_lo", num(s.r_lo)}, {"r_hi", num(s.r_hi)}, {"count", s.count},
                    {"xi_min", num(s.xi_min)}, {"xi_max", num(s.xi_max)}});
    }
  }
  p["normal_alignment"] = pr;
  ctx.payload["bdgg"] = p;
}

const std::map<std::string, std::function<void(Context&)>>& registry() {
  static const std::map<std::string, std::function<void(Context&)>> r{
      {"volume", run_volume}, {"spectrum", run_spectrum}, {"weyl", run_weyl},
      {"audit", run_audit},   {"pohozaev", run_pohozaev}, {"bdgg", run_bdgg}};
  return r;
}

}  // namespace

RunOutcome run(const std::string& subcommand, const RunConfig& config) {
  validate(config);
  const auto& reg = registry();
  if (subcommand != "all" && !reg.count(subcommand))
    fail(ErrorCode::InvalidArgument, "unknown subcommand '" + subcommand + "'");
  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::InvalidArgument, "cannot create output directory '" + config.out + "'");

  Context ctx{config, dir, "", json::object(), {}, {}};
  if (subcommand == "all") {
    for (const char* name : {"volume", "spectrum", "weyl", "audit", "pohozaev", "bdgg"}) {
      ctx.prefix = std::string(name) + ".";
      reg.at(name)(ctx);
    }
  } else {
    reg.at(subcommand)(ctx);
  }

  RunOutcome out;
  out.envelope.version = tool_version();
  out.envelope.subcommand = subcommand;
  out.envelope.timestamp = utc_timestamp();
  out.envelope.config = config_to_json(config);
  out.envelope.payload = ctx.payload;
  out.envelope.verdicts = ctx.verdicts;
  out.exit_code = 0;
  for (const auto& v : ctx.verdicts)
    if (v.status == "fail") out.exit_code = 2;
  const fs::path report = dir / "report.json";
  std::ofstream f(report);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + report.string() + "'");
  f << out.envelope.to_json().dump(2) << '\n';
  out.files = ctx.files;
  out.files.push_back(report.string());
  return out;
}

}  // namespace minlap
