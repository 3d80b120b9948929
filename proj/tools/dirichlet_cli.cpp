// dirichlet: command-line driver over the C API.
//
//   dirichlet <solve|energy|verify|recover|relax> [--config PATH] [--out DIR]
//             [--seed N] [--sequential] [--h H] [--panels N] [--tol T]
//
// Each run writes into <out>/<command>/<name-or-timestamp>/ and leaves a
// manifest.json with the resolved configuration, the files written and the
// exit code. The config schema is documented in README.md.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "dirichlet/dirichlet.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitVerifyFailed = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  ApiError(dp_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  dp_status status;
};

void check(dp_status s, const char* what) {
  if (s != DP_OK) throw ApiError(s, std::string(what) + ": " + dp_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Grid = std::unique_ptr<dp_grid, Deleter<dp_grid, dp_grid_free>>;
using Field = std::unique_ptr<dp_field, Deleter<dp_field, dp_field_free>>;
using Mesh = std::unique_ptr<dp_mesh, Deleter<dp_mesh, dp_mesh_free>>;
using Charges = std::unique_ptr<dp_charges, Deleter<dp_charges, dp_charges_free>>;
using SolveResult = std::unique_ptr<dp_solve_result, Deleter<dp_solve_result, dp_solve_result_free>>;
using Trace = std::unique_ptr<dp_relax_trace, Deleter<dp_relax_trace, dp_relax_trace_free>>;
using Report = std::unique_ptr<dp_verify_report, Deleter<dp_verify_report, dp_verify_report_free>>;

struct Flags {
  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool sequential = false;
  std::optional<double> h;
  std::optional<int> panels;
  std::optional<double> tol;
};

// Run state shared by the commands.
struct Run {
  json config;
  fs::path dir;
  std::vector<std::string> outputs;
  json results = json::object();

  std::string file(const std::string& name) {
    outputs.push_back(name);
    return (dir / name).string();
  }
};

// ---- config access -------------------------------------------------------

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite");
  return x;
}

double positive(const json& obj, const char* key, double fallback) {
  const double x = number(obj, key, fallback);
  if (!(x > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
  return x;
}

std::uint64_t count(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ConfigError(std::string("'") + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::array<double, 3> vec3(const json& obj, const char* key, std::array<double, 3> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(std::string("'") + key + "' must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
      throw ConfigError(std::string("'") + key + "' must contain finite numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

std::string text(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

dp_domain parse_domain(const json& j) {
  allow_keys(j, "domain", {"type", "lo", "hi", "center", "radius"});
  const std::string type = text(j, "type", "box");
  dp_domain d{};
  if (type == "box") {
    d.kind = DP_DOMAIN_BOX;
    const auto lo = vec3(j, "lo", {0, 0, 0});
    const auto hi = vec3(j, "hi", {1, 1, 1});
    for (int a = 0; a < 3; ++a) {
      if (!(lo[a] < hi[a])) throw ConfigError("domain: lo must be below hi on every axis");
      d.lo[a] = lo[a];
      d.hi[a] = hi[a];
    }
  } else if (type == "ball") {
    d.kind = DP_DOMAIN_BALL;
    const auto c = vec3(j, "center", {0, 0, 0});
    for (int a = 0; a < 3; ++a) d.center[a] = c[a];
    d.radius = positive(j, "radius", 1.0);
  } else {
    throw ConfigError("domain: type must be 'box' or 'ball'");
  }
  return d;
}

json domain_json(const dp_domain& d) {
  if (d.kind == DP_DOMAIN_BOX)
    return {{"type", "box"}, {"lo", {d.lo[0], d.lo[1], d.lo[2]}}, {"hi", {d.hi[0], d.hi[1], d.hi[2]}}};
  return {{"type", "ball"}, {"center", {d.center[0], d.center[1], d.center[2]}}, {"radius", d.radius}};
}

dp_expr parse_expr(const json& j, const char* where) {
  allow_keys(j, where, {"expr", "coeffs", "offset", "point", "radius", "scale"});
  dp_expr e;
  dp_expr_default(&e);
  const std::string name = text(j, "expr", "");
  if (name.empty()) throw ConfigError(std::string(where) + ": 'expr' is required");
  if (dp_expr_kind_from_name(name.c_str(), &e.kind) != DP_OK) throw ConfigError(std::string(where) + ": " + dp_last_error());
  const auto c = vec3(j, "coeffs", {1, 0, 0});
  const auto p = vec3(j, "point", {0, 0, 0});
  for (int a = 0; a < 3; ++a) {
    e.coeffs[a] = c[a];
    e.point[a] = p[a];
  }
  e.offset = number(j, "offset", 0.0);
  e.radius = number(j, "radius", 1.0);
  e.scale = number(j, "scale", 1.0);
  return e;
}

// Reads the shared grid parameters, applying flag overrides, and records the
// resolved values back into the config.
struct GridSpec {
  dp_domain domain;
  double h;
  double padding;
};

GridSpec grid_spec(Run& run, const Flags& flags, double default_h, double default_padding,
                   const json& default_domain = json::object()) {
  json& c = run.config;
  GridSpec g{parse_domain(c.value("domain", default_domain)), 0.0, 0.0};
  g.h = flags.h ? *flags.h : positive(c, "h", default_h);
  if (!(std::isfinite(g.h) && g.h > 0.0)) throw ConfigError("h must be positive");
  g.padding = number(c, "padding", default_padding);
  if (g.padding < 0.0) throw ConfigError("padding must be nonnegative");
  c["domain"] = domain_json(g.domain);
  c["h"] = g.h;
  c["padding"] = g.padding;
  return g;
}

Grid make_grid(const GridSpec& s) {
  dp_grid* g = nullptr;
  check(dp_grid_create(&s.domain, s.h, s.padding, &g), "grid");
  return Grid(g);
}

int panels_of(Run& run, const Flags& flags, int fallback) {
  const int n = flags.panels ? *flags.panels : static_cast<int>(count(run.config, "panels", static_cast<std::uint64_t>(fallback)));
  if (n < 1 || n > 1000) throw ConfigError("panels must lie in [1, 1000]");
  run.config["panels"] = n;
  return n;
}

Field field_from_source(const json& src, const dp_grid* grid, const char* where) {
  dp_field* f = nullptr;
  if (src.is_object() && src.contains("csv")) {
    allow_keys(src, where, {"csv"});
    check(dp_field_read_csv(grid, text(src, "csv", "").c_str(), &f), where);
  } else {
    const dp_expr e = parse_expr(src, where);
    check(dp_field_from_expr(grid, &e, &f), where);
  }
  return Field(f);
}

json report_json(const dp_energy_report& r) {
  return {{"volume_self", r.volume_self},
          {"surface_self", r.surface_self},
          {"mutual", r.mutual},
          {"total", r.total},
          {"dirichlet_interior", r.dirichlet_interior},
          {"dirichlet_exterior", r.dirichlet_exterior},
          {"complete_energy", r.complete_energy}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ApiError(DP_IO, "cannot write " + path);
  out << j.dump(2) << '\n';
}

// ---- commands ------------------------------------------------------------

int cmd_solve(Run& run, const Flags& flags) {
  allow_keys(run.config, "solve config",
             {"name", "seed", "domain", "h", "padding", "boundary", "tol", "max_iter", "jacobi", "minimality_probes"});
  const GridSpec spec = grid_spec(run, flags, 0.1, 0.0);
  dp_solve_options opts;
  dp_solve_options_default(&opts);
  opts.tol = flags.tol ? *flags.tol : positive(run.config, "tol", opts.tol);
  if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
  opts.max_iter = count(run.config, "max_iter", 0);
  opts.jacobi = run.config.value("jacobi", false) ? 1 : 0;
  run.config["tol"] = opts.tol;
  run.config["max_iter"] = opts.max_iter;
  run.config["jacobi"] = opts.jacobi != 0;
  const json boundary = run.config.value("boundary", json{{"expr", "linear"}});
  run.config["boundary"] = boundary;
  const std::uint64_t probes = count(run.config, "minimality_probes", 0);

  Grid grid = make_grid(spec);
  dp_solve_result* raw = nullptr;
  if (boundary.is_object() && boundary.contains("csv")) {
    Field f = field_from_source(boundary, grid.get(), "boundary");
    const dp_status s = dp_solve_field(f.get(), &opts, &raw);
    if (s == DP_INVALID_ARGUMENT) throw ConfigError(std::string("boundary: ") + dp_last_error());
    check(s, "solve");
  } else {
    const dp_expr e = parse_expr(boundary, "boundary");
    check(dp_solve_expr(grid.get(), &e, &opts, &raw), "solve");
  }
  SolveResult result(raw);

  dp_solve_info info;
  check(dp_solve_get_info(result.get(), &info), "solve info");
  check(dp_solve_write_json(result.get(), run.file("result.json").c_str()), "result.json");
  dp_field* field = nullptr;
  check(dp_solve_field_copy(result.get(), &field), "field");
  Field u(field);
  check(dp_field_write_csv(u.get(), run.file("field.csv").c_str()), "field.csv");
  check(dp_grid_write_json(grid.get(), run.file("grid.json").c_str()), "grid.json");

  run.results = {{"converged", info.converged != 0},
                 {"iterations", info.iterations},
                 {"dirichlet_energy", info.dirichlet_energy},
                 {"harmonicity_residual", info.harmonicity_residual},
                 {"harmonicity_bound", info.harmonicity_bound}};
  if (probes > 0 && info.converged) {
    const std::uint64_t seed = flags.seed ? *flags.seed : count(run.config, "seed", 1);
    run.config["seed"] = seed;
    dp_minimality_info m;
    check(dp_minimality_check(result.get(), probes, seed, &m), "minimality");
    run.results["minimality"] = {{"all_pass", m.all_pass != 0},
                                 {"max_first_variation", m.max_first_variation},
                                 {"min_relative_gain", m.min_relative_gain}};
  }
  std::printf("solve: %s after %zu iterations, D(u) = %.12g, max|Lap u| = %.3g\n",
              info.converged ? "converged" : "NOT converged", info.iterations, info.dirichlet_energy,
              info.harmonicity_residual);
  return info.converged ? kExitOk : kExitNotConverged;
}

int cmd_energy(Run& run, const Flags& flags) {
  allow_keys(run.config, "energy config",
             {"name", "seed", "domain", "h", "padding", "panels", "charges", "volume", "surface", "potential", "delta"});
  json& c = run.config;
  if (!c.contains("charges") && !c.contains("volume") && !c.contains("surface") && !c.contains("potential"))
    c["surface"] = {{"expr", "constant"}, {"scale", 1.0}};

  if (c.contains("charges")) {
    const json spec = c["charges"];
    Charges charges;
    dp_charges* raw = nullptr;
    if (spec.contains("csv")) {
      allow_keys(spec, "charges", {"csv"});
      check(dp_charges_read_csv(text(spec, "csv", "").c_str(), &raw), "charges");
    } else {
      allow_keys(spec, "charges", {"n", "mass", "margin"});
      const std::uint64_t seed = flags.seed ? *flags.seed : count(c, "seed", 1);
      c["seed"] = seed;
      const dp_domain d = parse_domain(c.value("domain", json{{"type", "ball"}}));
      check(dp_charges_random(&d, count(spec, "n", 10), number(spec, "mass", 1.0), seed, number(spec, "margin", 0.01),
                              &raw),
            "charges");
    }
    charges.reset(raw);
    double direct = 0.0, via = 0.0;
    check(dp_assembly_energy(charges.get(), &direct, &via), "assembly energy");
    check(dp_charges_write_csv(charges.get(), run.file("charges.csv").c_str()), "charges.csv");
    run.results["assembly_energy"] = direct;
    run.results["assembly_energy_via_potentials"] = via;
    std::printf("energy: assembly %.15g, via potentials %.15g\n", direct, via);
  }

  const bool continuous = c.contains("volume") || c.contains("surface") || c.contains("potential");
  if (!continuous) {
    write_json(run.file("energy.json"), run.results);
    return kExitOk;
  }

  const bool padding_given = c.contains("padding");
  const GridSpec spec = grid_spec(run, flags, 0.05, 0.0, json{{"type", "ball"}});
  const int n = panels_of(run, flags, 63);
  Mesh mesh;
  {
    dp_mesh* m = nullptr;
    check(dp_mesh_create(&spec.domain, n, &m), "mesh");
    mesh.reset(m);
  }
  size_t panel_count = 0;
  check(dp_mesh_size(mesh.get(), &panel_count, nullptr), "mesh");

  dp_energy_report report{};
  if (c.contains("potential")) {
    const dp_expr u = parse_expr(c["potential"], "potential");
    const double delta = positive(c, "delta", 2.0 * spec.h);
    c["delta"] = delta;
    GridSpec padded = spec;
    if (!padding_given) {
      padded.padding = 2.0 * spec.h;
      c["padding"] = padded.padding;
    }
    Grid grid = make_grid(padded);
    check(dp_energy_chain(grid.get(), &u, mesh.get(), delta, &report), "energy chain");
  } else {
    Grid grid = make_grid(spec);
    Field rho;
    if (c.contains("volume")) rho = field_from_source(c["volume"], grid.get(), "volume");
    std::vector<double> sigma;
    if (c.contains("surface")) {
      sigma.resize(panel_count);
      const dp_expr s = parse_expr(c["surface"], "surface");
      check(dp_mesh_sample_expr(mesh.get(), &s, sigma.data()), "surface density");
    }
    check(dp_total_energy(rho.get(), sigma.empty() ? nullptr : mesh.get(), sigma.empty() ? nullptr : sigma.data(),
                          &report),
          "total energy");
    if (rho && !sigma.empty()) {
      double vv = 0.0, vs = 0.0;
      check(dp_mutual_energy(rho.get(), mesh.get(), sigma.data(), &vv, &vs), "mutual energy");
      run.results["mutual_via_volume"] = vv;
      run.results["mutual_via_surface"] = vs;
    }
  }
  check(dp_energy_report_write_json(&report, run.file("energy.json").c_str()), "energy.json");
  run.results["energy"] = report_json(report);
  std::printf("energy: total %.12g (volume %.12g, surface %.12g, mutual %.12g), complete %.12g\n", report.total,
              report.volume_self, report.surface_self, report.mutual, report.complete_energy);
  return kExitOk;
}

int cmd_verify(Run& run, const Flags& flags) {
  allow_keys(run.config, "verify config",
             {"name", "seed", "h", "panels", "surface_h", "tol", "tolerances", "user_field"});
  json& c = run.config;
  dp_verify_options o;
  dp_verify_options_default(&o);
  o.h = flags.h ? *flags.h : positive(c, "h", o.h);
  o.panels = panels_of(run, flags, o.panels);
  o.surface_h = positive(c, "surface_h", o.surface_h);
  if (c.contains("tolerances")) {
    const json& t = c["tolerances"];
    allow_keys(t, "tolerances", {"green", "green_rate", "mutual", "chain", "poisson_volume", "poisson_surface"});
    o.tol_green = number(t, "green", o.tol_green);
    o.tol_green_rate = number(t, "green_rate", o.tol_green_rate);
    o.tol_mutual = number(t, "mutual", o.tol_mutual);
    o.tol_chain = number(t, "chain", o.tol_chain);
    o.tol_poisson_volume = number(t, "poisson_volume", o.tol_poisson_volume);
    o.tol_poisson_surface = number(t, "poisson_surface", o.tol_poisson_surface);
  }
  const std::optional<double> tol = flags.tol ? flags.tol : (c.contains("tol") ? std::optional(number(c, "tol", 0)) : std::nullopt);
  if (tol) dp_verify_options_set_tolerance(&o, *tol);
  c["h"] = o.h;
  c["surface_h"] = o.surface_h;
  c["tolerances"] = {{"green", o.tol_green},
                     {"green_rate", o.tol_green_rate},
                     {"mutual", o.tol_mutual},
                     {"chain", o.tol_chain},
                     {"poisson_volume", o.tol_poisson_volume},
                     {"poisson_surface", o.tol_poisson_surface}};

  Grid user_grid;
  Field user_field;
  if (c.contains("user_field")) {
    json& uf = c["user_field"];
    allow_keys(uf, "user_field", {"domain", "h", "padding", "csv", "expr", "coeffs", "offset", "point", "radius", "scale"});
    const dp_domain d = parse_domain(uf.value("domain", json::object()));
    dp_grid* g = nullptr;
    check(dp_grid_create(&d, positive(uf, "h", 0.1), number(uf, "padding", 0.0), &g), "user_field grid");
    user_grid.reset(g);
    json src = uf;
    src.erase("domain");
    src.erase("h");
    src.erase("padding");
    user_field = field_from_source(src, user_grid.get(), "user_field");
    o.user_field = user_field.get();
  }

  dp_verify_report* raw = nullptr;
  const dp_status s = dp_verify_run(&o, &raw);
  if (s == DP_INVALID_ARGUMENT) throw ConfigError(dp_last_error());
  check(s, "verify");
  Report report(raw);
  check(dp_verify_write(report.get(), run.dir.c_str()), "verify output");
  run.outputs.push_back("report.json");
  for (const char* t : {"green_study.csv", "mutual_study.csv", "energy_chain_study.csv", "surface_density.csv"})
    run.outputs.push_back(t);

  size_t n = 0;
  check(dp_verify_check_count(report.get(), &n), "verify");
  json checks = json::array();
  std::vector<std::string> failed;
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    double value = 0.0, limit = 0.0;
    int passed = 0;
    check(dp_verify_check(report.get(), i, &name, &value, &limit, &passed), "verify");
    std::printf("%-40s %-4s value %.3e  tol %.3e\n", name, passed ? "PASS" : "FAIL", value, limit);
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", limit}, {"passed", passed != 0}});
    if (!passed) failed.emplace_back(name);
  }
  run.results["checks"] = checks;
  if (!failed.empty()) {
    std::string list;
    for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
    std::fprintf(stderr, "verify: failed checks: %s\n", list.c_str());
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int cmd_recover(Run& run, const Flags& flags) {
  allow_keys(run.config, "recover config", {"name", "seed", "domain", "h", "padding", "panels", "potential", "delta"});
  json& c = run.config;
  const GridSpec spec = grid_spec(run, flags, 0.05, 0.0, json{{"type", "ball"}});
  const json potential = c.value("potential", json{{"expr", "paraboloid"}});
  c["potential"] = potential;
  Grid grid = make_grid(spec);
  Field u = field_from_source(potential, grid.get(), "potential");

  dp_field* raw = nullptr;
  size_t present = 0;
  check(dp_recover_volume_density(u.get(), &raw, &present), "volume density");
  Field rho(raw);
  check(dp_field_write_csv(rho.get(), run.file("volume_density.csv").c_str()), "volume_density.csv");
  run.results["volume_density_nodes"] = present;
  std::printf("recover: volume density at %zu nodes\n", present);

  if (!potential.contains("csv")) {
    const dp_expr e = parse_expr(potential, "potential");
    const int n = panels_of(run, flags, 63);
    const double delta = positive(c, "delta", 2.0 * spec.h);
    c["delta"] = delta;
    dp_mesh* m = nullptr;
    check(dp_mesh_create(&spec.domain, n, &m), "mesh");
    Mesh mesh(m);
    size_t panels = 0;
    check(dp_mesh_size(mesh.get(), &panels, nullptr), "mesh");
    std::vector<double> sigma(panels);
    check(dp_recover_surface_density(mesh.get(), &e, delta, sigma.data()), "surface density");
    check(dp_mesh_write_values_csv(mesh.get(), sigma.data(), run.file("surface_density.csv").c_str()),
          "surface_density.csv");
    run.results["surface_density_panels"] = panels;
    std::printf("recover: surface density on %zu panels\n", panels);
  }
  return kExitOk;
}

int cmd_relax(Run& run, const Flags& flags) {
  allow_keys(run.config, "relax config",
             {"name", "seed", "domain", "charges", "step", "shrink", "max_steps", "boundary_tol", "grad_tol"});
  json& c = run.config;
  const dp_domain d = parse_domain(c.value("domain", json{{"type", "ball"}}));
  c["domain"] = domain_json(d);
  dp_relax_config rc;
  dp_relax_config_default(&rc);
  rc.step = positive(c, "step", rc.step);
  rc.shrink = number(c, "shrink", rc.shrink);
  if (!(rc.shrink > 0.0 && rc.shrink < 1.0)) throw ConfigError("shrink must lie in (0, 1)");
  rc.max_steps = count(c, "max_steps", rc.max_steps);
  rc.boundary_tol = positive(c, "boundary_tol", rc.boundary_tol);
  rc.grad_tol = flags.tol ? *flags.tol : positive(c, "grad_tol", rc.grad_tol);
  if (!(rc.grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  c["step"] = rc.step;
  c["shrink"] = rc.shrink;
  c["max_steps"] = rc.max_steps;
  c["boundary_tol"] = rc.boundary_tol;
  c["grad_tol"] = rc.grad_tol;

  json spec = c.value("charges", json{{"n", 3}});
  dp_charges* raw = nullptr;
  if (spec.contains("csv")) {
    allow_keys(spec, "charges", {"csv"});
    check(dp_charges_read_csv(text(spec, "csv", "").c_str(), &raw), "charges");
  } else {
    allow_keys(spec, "charges", {"n", "mass", "margin"});
    const std::uint64_t seed = flags.seed ? *flags.seed : count(c, "seed", 1);
    c["seed"] = seed;
    spec["n"] = count(spec, "n", 3);
    spec["mass"] = number(spec, "mass", 1.0);
    spec["margin"] = number(spec, "margin", 0.05);
    check(dp_charges_random(&d, spec["n"].get<std::uint64_t>(), spec["mass"].get<double>(), seed,
                            spec["margin"].get<double>(), &raw),
          "charges");
  }
  c["charges"] = spec;
  Charges charges(raw);
  check(dp_charges_write_csv(charges.get(), run.file("initial_charges.csv").c_str()), "initial_charges.csv");

  dp_relax_trace* t = nullptr;
  const dp_status s = dp_relax(&d, charges.get(), &rc, &t);
  if (s == DP_INVALID_ARGUMENT || s == DP_ZERO_DISTANCE) throw ConfigError(std::string("relax: ") + dp_last_error());
  check(s, "relax");
  Trace trace(t);
  check(dp_relax_write_csv(trace.get(), run.file("trace.csv").c_str(), run.file("positions.csv").c_str()), "trace");
  dp_relax_summary sum;
  check(dp_relax_get_summary(trace.get(), &sum), "relax summary");
  static const char* names[] = {"converged", "max_steps", "stalled"};
  const bool on_boundary = sum.max_boundary_distance <= rc.boundary_tol;
  run.results = {{"status", names[sum.status]},
                 {"accepted_steps", sum.accepted_steps},
                 {"initial_energy", sum.initial_energy},
                 {"final_energy", sum.final_energy},
                 {"final_max_grad", sum.final_max_grad},
                 {"max_boundary_distance", sum.max_boundary_distance},
                 {"strictly_decreasing", sum.strictly_decreasing != 0},
                 {"all_on_boundary", on_boundary}};
  std::printf("relax: %s after %zu steps, energy %.15g, max boundary distance %.3g\n", names[sum.status],
              sum.accepted_steps, sum.final_energy, sum.max_boundary_distance);
  return sum.converged && on_boundary ? kExitOk : kExitNotConverged;
}

// ---- driver --------------------------------------------------------------

std::string utc_stamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path make_run_dir(const Flags& flags, const json& config) {
  const fs::path base = fs::path(flags.out_dir) / flags.command;
  std::string name = text(config, "name", "");
  if (name.find('/') != std::string::npos || name == "." || name == "..")
    throw ConfigError("name must be a plain directory name");
  const bool named = !name.empty();
  if (!named) name = utc_stamp();
  fs::path dir = base / name;
  // Timestamps can collide within a second; named runs are overwritten.
  for (int i = 1; !named && fs::exists(dir); ++i) dir = base / (name + "-" + std::to_string(i));
  fs::create_directories(dir);
  return dir;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  Flags flags;
  CLI::App app{"Electrostatic energy identities and the Dirichlet principle on grids"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1, 1);
  app.add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", flags.out_dir, "output root directory")->capture_default_str();
  app.add_option("--seed", flags.seed, "64-bit seed for random inputs");
  app.add_flag("--sequential", flags.sequential, "single-threaded evaluation");
  app.add_option("--h", flags.h, "grid spacing");
  app.add_option("--panels", flags.panels, "surface panel resolution");
  app.add_option("--tol", flags.tol, "tolerance (solver tol, verify tolerances, or relax grad_tol)");
  app.fallthrough();
  const std::pair<const char*, const char*> commands[] = {
      {"solve", "harmonic extension of boundary data by energy minimization"},
      {"energy", "discrete, volume, surface and Dirichlet energies"},
      {"verify", "identity checks at two resolutions"},
      {"recover", "densities from a potential"},
      {"relax", "charges relaxed to an energy minimum in a domain"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->callback([&flags, sub] { flags.command = sub->get_name(); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  dp_set_sequential(flags.sequential ? 1 : 0);
  Run run;
  int code = kExitOk;
  try {
    run.config = load_config(flags.config_path);
    run.dir = make_run_dir(flags, run.config);
    if (flags.command == "solve") code = cmd_solve(run, flags);
    else if (flags.command == "energy") code = cmd_energy(run, flags);
    else if (flags.command == "verify") code = cmd_verify(run, flags);
    else if (flags.command == "recover") code = cmd_recover(run, flags);
    else code = cmd_relax(run, flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    code = kExitConfig;
  } catch (const ApiError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.status) {
      case DP_INVALID_ARGUMENT:
      case DP_DOMAIN_TOO_SMALL:
      case DP_ZERO_DISTANCE:
      case DP_GRID_MISMATCH: code = kExitConfig; break;
      case DP_NOT_CONVERGED:
      case DP_STALLED: code = kExitNotConverged; break;
      default: code = kExitFailure;
    }
  }
  if (run.dir.empty()) return code;

  json manifest;
  manifest["command"] = flags.command;
  manifest["created_utc"] = utc_stamp();
  manifest["exit_code"] = code;
  manifest["sequential"] = flags.sequential;
  manifest["config"] = run.config;
  manifest["results"] = run.results;
  manifest["outputs"] = run.outputs;
  try {
    write_json((run.dir / "manifest.json").string(), manifest);
    std::printf("output: %s\n", run.dir.string().c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return code;
}
