#include "cli.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "heis/distance.hpp"
#include "heis/geodesic.hpp"
#include "heis/oracles.hpp"
#include "heis/parallel.hpp"
#include "heis/steiner.hpp"

namespace heis::cli {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::set<std::string> region = {"annulus", "box", "graph_axis", "grid"};
  static const std::map<std::string, std::set<std::string>> m = [] {
    std::map<std::string, std::set<std::string>> a;
    a["distance"] = {"p", "q"};
    a["geodesic"] = {"p", "v", "lambda", "s", "steps"};
    a["project"] = region;
    a["project"].insert("p");
    a["tube"] = {"annulus", "box", "graph_axis", "r", "r_grid", "samples", "seed", "quad_order", "quad_cells"};
    a["series"] = {"annulus", "box", "graph_axis", "quad_order", "quad_cells"};
    a["reach"] = region;
    a["verify"] = {"seed"};
    a["singular-scan"] = region;
    a["singular-scan"].insert("eps");
    return a;
  }();
  return m;
}

bool uses_surface(const std::string& c) { return c != "distance" && c != "geodesic" && c != "verify"; }
bool uses_patch(const std::string& c) { return uses_surface(c); }

std::string fmt17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? json("nan") : json(x > 0 ? "inf" : "-inf");
}

json coords_json(const Point& p) {
  json a = json::array();
  const CVec c = p.coords();
  for (Eigen::Index i = 0; i < c.size(); ++i) a.push_back(c(i));
  return a;
}

json hvec_json(const HVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string coord_header(int n, const std::string& prefix = "") {
  std::string h;
  for (int i = 1; i <= n; ++i) h += prefix + "x" + std::to_string(i) + "," + prefix + "y" + std::to_string(i) + ",";
  return h + prefix + "t";
}

std::string coord_row(const Point& p) {
  std::string s;
  const CVec c = p.coords();
  for (Eigen::Index i = 0; i < c.size(); ++i) s += (i ? "," : "") + fmt17(c(i));
  return s;
}

const std::vector<double>& param(const RunConfig& c, const std::string& key) {
  static const std::vector<double> none;
  const auto it = c.params.find(key);
  return it == c.params.end() ? none : it->second;
}

bool has(const RunConfig& c, const std::string& key) { return c.params.count(key) > 0; }

double scalar(const RunConfig& c, const std::string& key, double fallback) {
  const auto& v = param(c, key);
  if (v.empty()) return fallback;
  if (v.size() != 1) throw UsageError("--" + key + " takes one value");
  return v[0];
}

int integer(const RunConfig& c, const std::string& key, int fallback) {
  const double v = scalar(c, key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("--" + key + " must be an integer");
  return static_cast<int>(v);
}

Point point_param(const RunConfig& c, const std::string& key) {
  const auto& v = param(c, key);
  if (v.empty()) throw UsageError("--" + key + " is required");
  if (static_cast<int>(v.size()) != 2 * c.n + 1)
    throw UsageError("--" + key + " needs " + std::to_string(2 * c.n + 1) + " coordinates");
  return Point::from_vector(v);
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const AmbiguousProjection*>(&e)) return "AmbiguousProjection";
  if (dynamic_cast<const ReachExceeded*>(&e)) return "ReachExceeded";
  if (dynamic_cast<const SingularPoint*>(&e)) return "SingularPoint";
  if (dynamic_cast<const NotUmbilic*>(&e)) return "NotUmbilic";
  if (dynamic_cast<const WrongDimension*>(&e)) return "WrongDimension";
  if (dynamic_cast<const OffSurface*>(&e)) return "OffSurface";
  if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const UsageError*>(&e)) return "UsageError";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
  return "Error";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return kDomainError;
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return kUsageError;
  return kDomainError;
}

// Fill defaults so that the echoed config pins everything the run reads.
RunConfig resolve(RunConfig c) {
  validate(c);
  if (c.n == 0) {
    const auto& p = param(c, "p");
    c.n = p.empty() ? 1 : static_cast<int>(p.size() - 1) / 2;
  }
  check_dimension(c.n);
  c.threads = resolve_threads(c.threads);
  auto def = [&](const std::string& k, double v) {
    if (!has(c, k)) c.params[k] = {v};
  };
  const std::string& cmd = c.command;
  if (cmd == "geodesic") {
    def("lambda", 0.0);
    def("steps", 1);
  }
  if (cmd == "project" || cmd == "reach" || cmd == "singular-scan") {
    const int per_dim[] = {0, 60, 10, 5, 4};
    def("grid", cmd == "project" ? per_dim[c.n] : (c.n == 1 ? 24 : per_dim[c.n]));
  }
  if (cmd == "singular-scan") def("eps", kEpsSing);
  if (cmd == "tube" || cmd == "series") {
    def("quad_order", 8);
    def("quad_cells", 2);
  }
  if (cmd == "tube" && c.method == "mc") {
    def("samples", 100000);
    def("seed", 1);
  }
  if (cmd == "verify") def("seed", 1);
  if (has(c, "box") && !has(c, "graph_axis")) c.params["graph_axis"] = {2.0 * c.n};
  return c;
}

LevelSurface surface_of(const RunConfig& c) { return load_surface(c.surface, c.n); }

std::optional<SurfacePatch> explicit_patch(const RunConfig& c) {
  const int n = c.n;
  if (!c.patch.empty()) {
    std::ifstream in(c.patch);
    if (!in) throw UsageError("cannot read patch file " + c.patch);
    SurfacePatch P = patch_from_json(json::parse(in));
    if (P.n != n) throw UsageError("patch dimension differs from --n");
    return P;
  }
  if (has(c, "annulus")) {
    const auto& a = param(c, "annulus");
    if (a.size() == 2) return annulus_patch(n, a[0], a[1]);
    if (a.size() == 3) return annulus_patch(n, a[0], a[1], a[2]);
    throw UsageError("--annulus takes r0 r1 [half width]");
  }
  if (has(c, "box")) {
    const auto& b = param(c, "box");
    if (static_cast<int>(b.size()) != 4 * n) throw UsageError("--box takes lo hi for each of the 2n free coordinates");
    std::vector<Interval> iv;
    for (int k = 0; k < 2 * n; ++k) iv.push_back({b[2 * k], b[2 * k + 1]});
    const int axis = integer(c, "graph_axis", 2 * n);
    if (axis < 0 || axis > 2 * n) throw UsageError("--graph-axis out of range");
    return box_patch(n, axis, iv);
  }
  return std::nullopt;
}

SurfacePatch patch_of(const RunConfig& c, const LevelSurface& S) {
  if (auto P = explicit_patch(c)) return *P;
  return default_patch(S);
}

// Seed region for a projection: an explicit patch, else a t-graph box around p
// wide enough to hold every foot of interest, else the surface default.
SurfacePatch seed_region(const RunConfig& c, const LevelSurface& S, const Point& p) {
  if (auto P = explicit_patch(c)) return *P;
  const std::string& L = S.label();
  if (L == "plane-t" || L == "saddle-t-xy" || L == "paraboloid") {
    const double R = 2.0 * (1.0 + p.z.norm() + std::sqrt(std::abs(p.t)));
    std::vector<Interval> iv;
    for (int k = 0; k < 2 * c.n; ++k) iv.push_back({p.z(k) - R, p.z(k) + R});
    return box_patch(c.n, 2 * c.n, iv);
  }
  return default_patch(S);
}

std::vector<double> radii_of(const RunConfig& c) {
  std::vector<double> r = param(c, "r");
  if (has(c, "r_grid")) {
    const auto& g = param(c, "r_grid");
    if (g.size() != 3 || g[2] < 1 || g[2] != std::floor(g[2])) throw UsageError("--r-grid takes r0 r1 count");
    const int k = static_cast<int>(g[2]);
    for (int i = 0; i < k; ++i) r.push_back(k == 1 ? g[0] : g[0] + (g[1] - g[0]) * i / (k - 1));
  }
  if (r.empty()) throw UsageError("tube needs --r or --r-grid");
  return r;
}

TubeOptions tube_options(const RunConfig& c) {
  TubeOptions o;
  o.quad.order = integer(c, "quad_order", 8);
  o.quad.cells = integer(c, "quad_cells", 2);
  o.threads = c.threads;
  if (o.quad.order != 4 && o.quad.order != 8 && o.quad.order != 16 && o.quad.order != 32)
    throw UsageError("--quad-order must be 4, 8, 16 or 32");
  if (o.quad.cells < 1) throw UsageError("--quad-cells must be positive");
  return o;
}

struct Output {
  json result = json::object();
  std::vector<std::string> csv_header;  // comment lines
  std::string csv_columns;
  std::vector<std::string> csv_rows;
  int code = kOk;
  json error;  // set on domain failures that still carry a result
};

Output do_distance(const RunConfig& c) {
  const Point p = point_param(c, "p"), q = point_param(c, "q");
  const InverseGeodesic g = cc_inverse(p, q);
  Output o;
  o.result = {{"dist", g.length}, {"lambda", g.curvature}, {"dir", hvec_json(g.dir)}, {"on_axis", g.on_axis}};
  std::string dirs;
  for (int i = 1; i <= c.n; ++i) dirs += ",dir_x" + std::to_string(i) + ",dir_y" + std::to_string(i);
  o.csv_columns = "dist,lambda,on_axis" + dirs;
  std::string row = fmt17(g.length) + "," + fmt17(g.curvature) + "," + (g.on_axis ? "1" : "0");
  for (Eigen::Index i = 0; i < g.dir.size(); ++i) row += "," + fmt17(g.dir(i));
  o.csv_rows.push_back(row);
  return o;
}

Output do_geodesic(const RunConfig& c) {
  const Point p = point_param(c, "p");
  const auto& v = param(c, "v");
  if (static_cast<int>(v.size()) != 2 * c.n) throw UsageError("--v needs 2n components");
  HVec w(2 * c.n);
  for (int i = 0; i < 2 * c.n; ++i) w(i) = v[i];
  if (!(w.norm() > 0)) throw UsageError("--v must be nonzero");
  w.normalize();
  const double lam = scalar(c, "lambda", 0.0);
  const double s = scalar(c, "s", std::numeric_limits<double>::quiet_NaN());
  if (!(s >= 0)) throw UsageError("--s must be a nonnegative length");
  const int steps = integer(c, "steps", 1);
  if (steps < 1) throw UsageError("--steps must be positive");
  const GeodesicArc arc = GeodesicArc::make(p, FrameVector(w), lam, s);
  Output o;
  json pts = json::array();
  o.csv_columns = "s," + coord_header(c.n);
  for (int k = 0; k <= steps; ++k) {
    const double sk = s * k / steps;
    const Point q = geodesic_point(arc.base, w, lam, sk);
    pts.push_back({{"s", sk}, {"point", coords_json(q)}});
    o.csv_rows.push_back(fmt17(sk) + "," + coord_row(q));
  }
  const Point end = geodesic_point(arc);
  o.result = {{"end", coords_json(end)}, {"dir", hvec_json(w)}, {"lambda", lam}, {"length", s}, {"samples", pts}};
  return o;
}

Output do_project(const RunConfig& c) {
  const LevelSurface S = surface_of(c);
  const Point p = point_param(c, "p");
  const SurfacePatch region = seed_region(c, S, p);
  const auto seeds = region.grid(S, integer(c, "grid", 60));
  if (seeds.empty()) throw NoConvergence("seed region holds no surface points");
  ProjectionOptions po;
  po.max_seeds = 8;
  const ProjectionResult r = project_to_surface(S, p, seeds, po);
  Output o;
  json feet = json::array();
  o.csv_columns = "foot,dist,lambda,tied," + coord_header(c.n);
  int k = 0;
  for (const auto& f : r.feet) {
    const bool tied = f.dist <= r.dist * (1.0 + po.tie_rel);
    feet.push_back({{"foot", coords_json(f.foot)}, {"dist", f.dist}, {"lambda", f.lambda}, {"dir", hvec_json(f.dir)},
                    {"tied", tied}});
    o.csv_rows.push_back(std::to_string(k++) + "," + fmt17(f.dist) + "," + fmt17(f.lambda) + "," + (tied ? "1" : "0") +
                         "," + coord_row(f.foot));
  }
  o.result = {{"foot", coords_json(r.foot)},
              {"dist", r.dist},
              {"lambda", r.arc.curvature},
              {"dir", hvec_json(r.arc.dir.h)},
              {"multiplicity_hint", r.multiplicity_hint},
              {"feet", feet}};
  if (r.ambiguous) {
    o.code = kDomainError;
    o.error = {{"type", "AmbiguousProjection"},
               {"message", std::to_string(r.multiplicity_hint) + " feet at the same distance"}};
  }
  return o;
}

Output do_tube(const RunConfig& c) {
  const LevelSurface S = surface_of(c);
  const SurfacePatch U = patch_of(c, S);
  const std::vector<double> radii = radii_of(c);
  const TubeOptions opt = tube_options(c);
  Output o;
  o.csv_columns = "r,volume,method,std_error";
  json rows = json::array();
  std::string method = c.method;
  if (method == "mc") {
    const std::int64_t samples = static_cast<std::int64_t>(scalar(c, "samples", 1e5));
    const auto seed = static_cast<std::uint64_t>(scalar(c, "seed", 1));
    MCOptions mo;
    mo.threads = c.threads;
    for (double r : radii) {
      const MCEstimate e = mc_tube_volume(S, U, tube_bounding_box(S, U, r), r, samples, seed, mo);
      rows.push_back({{"r", r},
                      {"volume", e.value},
                      {"std_error", e.std_error},
                      {"hits", e.hits},
                      {"ambiguous", e.ambiguous},
                      {"projection_failures", e.projection_failures}});
      o.csv_rows.push_back(fmt17(r) + "," + fmt17(e.value) + "," + to_string(TubeMethod::MonteCarlo) + "," + fmt17(e.std_error));
    }
    o.result = {{"method", to_string(TubeMethod::MonteCarlo)}, {"seed", seed}, {"samples", samples}, {"rows", rows}};
    o.csv_header.push_back("generator: philox4x32-10, seed " + std::to_string(seed));
    return o;
  }
  if (method == "auto") method = S.n() == 1 ? "h1" : "hn";
  TubeResult t;
  if (method == "h1") t = tube_volume_h1(S, U, radii, opt);
  else if (method == "hn") t = tube_volume_hn(S, U, radii, opt);
  else t = tube_volume_umbilic(S, U, radii, opt);
  const std::string m = to_string(t.method);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    rows.push_back({{"r", t.radii[i]}, {"volume", t.volumes[i]}});
    o.csv_rows.push_back(fmt17(t.radii[i]) + "," + fmt17(t.volumes[i]) + "," + m + ",");
  }
  const json s3 = {{"c1", t.series3.c1}, {"c2", t.series3.c2}, {"c3", t.series3.c3}};
  o.result = {{"method", m}, {"rows", rows}, {"series3", s3}};
  o.csv_header.push_back("series3: c1 " + fmt17(t.series3.c1) + " c2 " + fmt17(t.series3.c2) + " c3 " +
                         fmt17(t.series3.c3));
  return o;
}

Output do_series(const RunConfig& c) {
  const LevelSurface S = surface_of(c);
  const Series3 s = series3(S, patch_of(c, S), tube_options(c));
  Output o;
  o.result = {{"c1", s.c1}, {"c2", s.c2}, {"c3", s.c3}, {"remainder_o_r4", s.remainder_o_r4}};
  o.csv_columns = "c1,c2,c3,remainder_o_r4";
  o.csv_rows.push_back(fmt17(s.c1) + "," + fmt17(s.c2) + "," + fmt17(s.c3) + "," + (s.remainder_o_r4 ? "1" : "0"));
  return o;
}

Output do_reach(const RunConfig& c) {
  const LevelSurface S = surface_of(c);
  const auto grid = patch_of(c, S).grid(S, integer(c, "grid", 24));
  if (grid.empty()) throw NoConvergence("patch holds no surface points");
  const ReachEstimate r = reach_estimate(S, grid);
  Output o;
  o.result = {{"reach", num(r.value)},
              {"unbounded", r.unbounded()},
              {"conjugate", num(r.conjugate)},
              {"minimality", num(r.minimality)},
              {"collision", num(r.collision)},
              {"grid_points", grid.size()}};
  o.csv_columns = "reach,conjugate,minimality,collision";
  o.csv_rows.push_back(fmt17(r.value) + "," + fmt17(r.conjugate) + "," + fmt17(r.minimality) + "," +
                       fmt17(r.collision));
  return o;
}

Output do_verify(const RunConfig& c) {
  const auto checks = verify_suite(static_cast<std::uint64_t>(scalar(c, "seed", 1)), c.threads);
  Output o;
  json arr = json::array();
  o.csv_columns = "check,value,reference,tol,pass";
  bool all = true;
  for (const auto& k : checks) {
    arr.push_back({{"check", k.name}, {"value", num(k.value)}, {"reference", num(k.reference)}, {"tol", k.tol},
                   {"pass", k.pass}});
    o.csv_rows.push_back(k.name + "," + fmt17(k.value) + "," + fmt17(k.reference) + "," + fmt17(k.tol) + "," +
                         (k.pass ? "1" : "0"));
    all = all && k.pass;
  }
  o.result = {{"checks", arr}, {"all_pass", all}};
  if (!all) {
    o.code = kDomainError;
    o.error = {{"type", "VerificationFailed"}, {"message", "at least one check failed"}};
  }
  return o;
}

Output do_singular_scan(const RunConfig& c) {
  const LevelSurface S = surface_of(c);
  const auto pts = singular_set_scan(S, patch_of(c, S), integer(c, "grid", 24), scalar(c, "eps", kEpsSing));
  Output o;
  json arr = json::array();
  o.csv_columns = coord_header(c.n);
  for (const auto& p : pts) {
    arr.push_back(coords_json(p));
    o.csv_rows.push_back(coord_row(p));
  }
  o.result = {{"points", arr}, {"count", pts.size()}};
  return o;
}

Output dispatch(const RunConfig& c) {
  const std::string& k = c.command;
  if (k == "distance") return do_distance(c);
  if (k == "geodesic") return do_geodesic(c);
  if (k == "project") return do_project(c);
  if (k == "tube") return do_tube(c);
  if (k == "series") return do_series(c);
  if (k == "reach") return do_reach(c);
  if (k == "verify") return do_verify(c);
  return do_singular_scan(c);
}

void emit(std::ostream& os, const RunConfig& c, const json& echo, const Output& o, const json& error) {
  if (c.format == Format::Json) {
    json doc = {{"schema", kSchema}, {"command", c.command}, {"config", echo}};
    if (!o.result.empty()) doc["result"] = o.result;
    if (!error.is_null()) doc["error"] = error;
    os << doc.dump(2) << "\n";
    return;
  }
  os << "# schema " << kSchema << "\n# config " << echo.dump() << "\n";
  for (const auto& h : o.csv_header) os << "# " << h << "\n";
  if (!error.is_null()) os << "# error " << error.dump() << "\n";
  if (!o.csv_columns.empty()) os << o.csv_columns << "\n";
  for (const auto& r : o.csv_rows) os << r << "\n";
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"distance", "geodesic", "project", "tube",
                                             "series",   "reach",    "verify",  "singular-scan"};
  return c;
}

void validate(const RunConfig& c) {
  const auto& allowed = allowed_params();
  const auto it = allowed.find(c.command);
  if (it == allowed.end()) throw UsageError("unknown command: " + c.command);
  for (const auto& [k, v] : c.params) {
    if (!it->second.count(k)) throw UsageError("unknown key for " + c.command + ": " + k);
    for (double x : v)
      if (!std::isfinite(x)) throw UsageError("non-finite value for " + k);
  }
  if (c.n < 0 || c.n > kMaxN) throw UsageError("--n must lie in [1, " + std::to_string(kMaxN) + "]");
  if (const auto& p = param(c, "p"); !p.empty()) {
    if (p.size() < 3 || p.size() % 2 == 0) throw UsageError("--p needs 2n+1 coordinates");
    if (c.n != 0 && static_cast<int>(p.size()) != 2 * c.n + 1) throw UsageError("--p does not match --n");
  }
  static const std::set<std::string> methods = {"auto", "h1", "hn", "umbilic", "mc"};
  if (!methods.count(c.method)) throw UsageError("unknown method: " + c.method);
  if (c.method != "auto" && c.command != "tube") throw UsageError("--method applies to tube only");
  if (!c.patch.empty() && !uses_patch(c.command)) throw UsageError("--patch does not apply to " + c.command);
  if (c.threads < 0) throw UsageError("--threads must be nonnegative");
}

json config_to_json(const RunConfig& c) {
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  json j = {{"command", c.command}, {"n", c.n}, {"params", params}, {"format", c.format == Format::Json ? "json" : "csv"},
            {"threads", c.threads}};
  if (uses_surface(c.command)) j["surface"] = c.surface;
  if (!c.patch.empty()) j["patch"] = c.patch;
  if (c.command == "tube") j["method"] = c.method;
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

RunConfig config_from_json(const json& j) {
  static const std::set<std::string> keys = {"command", "n", "params", "format", "threads",
                                             "surface", "patch", "method", "output"};
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  const json& body = j.contains("config") && j.contains("schema") ? j.at("config") : j;
  RunConfig c;
  try {
    for (const auto& [k, v] : body.items()) {
      if (!keys.count(k)) throw UsageError("unknown config key: " + k);
    }
    c.command = body.at("command").get<std::string>();
    c.n = body.value("n", 0);
    c.surface = body.value("surface", c.surface);
    c.patch = body.value("patch", std::string());
    c.method = body.value("method", c.method);
    c.output = body.value("output", std::string());
    c.threads = body.value("threads", 0);
    const std::string f = body.value("format", std::string("json"));
    if (f != "json" && f != "csv") throw UsageError("format must be json or csv");
    c.format = f == "json" ? Format::Json : Format::Csv;
    if (body.contains("params"))
      for (const auto& [k, v] : body.at("params").items()) c.params[k] = v.get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return c;
}

int run(const RunConfig& cfg, std::ostream& out) {
  RunConfig c;
  json echo;
  Output o;
  json error;
  int code = kOk;
  try {
    c = resolve(cfg);
    echo = config_to_json(c);
    o = dispatch(c);
    code = o.code;
    error = o.error;
  } catch (const std::exception& e) {
    if (echo.is_null()) {
      c = cfg;
      echo = config_to_json(cfg);
    }
    code = exit_code_for(e);
    error = {{"type", error_type(e)}, {"message", e.what()}};
    o = Output{};
  }
  std::ofstream file;
  std::ostream* os = &out;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) {
      std::cerr << "cannot write " << c.output << "\n";
      return kUsageError;
    }
    os = &file;
  }
  emit(*os, c, echo, o, error);
  if (!error.is_null() && os != &std::cerr) std::cerr << error.at("type").get<std::string>() << ": "
                                                      << error.at("message").get<std::string>() << "\n";
  return code;
}

int run(const RunConfig& cfg) { return run(cfg, std::cout); }

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heisenberg group geodesics, distances and tube volumes"};
  app.require_subcommand(0, 1);
  std::string config_file;
  app.add_option("--config", config_file, "run an echoed config (JSON) instead of flags")->check(CLI::ExistingFile);

  RunConfig cfg;
  std::string format = "json";
  std::map<std::string, std::vector<double>> vals;
  std::map<std::string, CLI::Option*> opts;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "dimension of H^n (default: from --p, else 1)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.output, "output file");
    sub->add_option("--threads", cfg.threads, "worker cap (default: HEIS_TUBE_THREADS, else all cores)");
  };
  auto numeric = [&](CLI::App* sub, const std::string& key, const std::string& help, int count) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    auto* o = sub->add_option(flag, vals[sub->get_name() + "/" + key], help);
    if (count > 0) o->expected(count);
    else o->expected(1, 64);
    opts[sub->get_name() + "/" + key] = o;
  };
  auto surface_opts = [&](CLI::App* sub, bool patch) {
    sub->add_option("--surface", cfg.surface, "built-in name (plane-t, saddle-t-xy, halfspace-x1, cylinder:R=1, "
                                              "paraboloid:a=1) or JSON file");
    if (!patch) return;
    sub->add_option("--patch", cfg.patch, "patch JSON file");
    numeric(sub, "annulus", "polar patch: r0 r1 [half width of extra coordinates]", 0);
    numeric(sub, "box", "box patch: lo hi for each free coordinate", 0);
    numeric(sub, "graph_axis", "coordinate solved from g = 0 for --box (default t)", 1);
  };

  auto* dist = app.add_subcommand("distance", "Carnot-Caratheodory distance between two points");
  common(dist);
  numeric(dist, "p", "first point (2n+1 coordinates)", 0);
  numeric(dist, "q", "second point", 0);

  auto* geo = app.add_subcommand("geodesic", "points along a geodesic");
  common(geo);
  numeric(geo, "p", "base point", 0);
  numeric(geo, "v", "horizontal direction (normalised)", 0);
  numeric(geo, "lambda", "curvature", 1);
  numeric(geo, "s", "length", 1);
  numeric(geo, "steps", "number of segments to sample", 1);

  auto* proj = app.add_subcommand("project", "metric projection onto a surface");
  common(proj);
  surface_opts(proj, true);
  numeric(proj, "p", "point in the exterior g > 0", 0);
  numeric(proj, "grid", "seed grid per parameter", 1);

  auto* tube = app.add_subcommand("tube", "tube volumes |U_r|");
  common(tube);
  surface_opts(tube, true);
  numeric(tube, "r", "radii", 0);
  numeric(tube, "r_grid", "r0 r1 count", 3);
  numeric(tube, "samples", "Monte Carlo samples", 1);
  numeric(tube, "seed", "Monte Carlo seed", 1);
  numeric(tube, "quad_order", "Gauss nodes per cell (4, 8, 16, 32)", 1);
  numeric(tube, "quad_cells", "cells per parameter", 1);
  tube->add_option("--method", cfg.method, "auto, h1, hn, umbilic or mc")
      ->check(CLI::IsMember({"auto", "h1", "hn", "umbilic", "mc"}));

  auto* ser = app.add_subcommand("series", "coefficients of r, r^2, r^3 in |U_r|");
  common(ser);
  surface_opts(ser, true);
  numeric(ser, "quad_order", "Gauss nodes per cell", 1);
  numeric(ser, "quad_cells", "cells per parameter", 1);

  auto* reach = app.add_subcommand("reach", "lower estimate of the reach over a patch grid");
  common(reach);
  surface_opts(reach, true);
  numeric(reach, "grid", "grid per parameter", 1);

  auto* ver = app.add_subcommand("verify", "oracle cross-checks");
  common(ver);
  numeric(ver, "seed", "random seed", 1);

  auto* scan = app.add_subcommand("singular-scan", "characteristic points in a patch");
  common(scan);
  surface_opts(scan, true);
  numeric(scan, "grid", "grid per parameter", 1);
  numeric(scan, "eps", "threshold on |N_h| / |grad g|", 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (!config_file.empty()) {
      if (!app.get_subcommands().empty()) throw UsageError("--config replaces the subcommand");
      std::ifstream in(config_file);
      return run(config_from_json(json::parse(in)), out);
    }
    if (app.get_subcommands().empty()) throw UsageError("a subcommand is required; see --help");
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kUsageError;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  cfg.command = name;
  cfg.format = format == "csv" ? Format::Csv : Format::Json;
  for (const auto& [key, o] : opts) {
    if (o->count() == 0) continue;
    const std::string sub = key.substr(0, key.find('/'));
    if (sub != name) continue;
    cfg.params[key.substr(key.find('/') + 1)] = vals[key];
  }
  return run(cfg, out);
}

}  // namespace heis::cli
