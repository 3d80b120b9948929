#include "dirichlet/dirichlet.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "dirichlet/csv.hpp"
#include "dirichlet/electrostatics.hpp"
#include "dirichlet/energy_identities.hpp"
#include "dirichlet/error.hpp"
#include "dirichlet/expressions.hpp"
#include "dirichlet/parallel.hpp"
#include "dirichlet/potential_fields.hpp"
#include "dirichlet/relaxation.hpp"
#include "dirichlet/variational.hpp"
#include "dirichlet/verify.hpp"

namespace dp = dirichlet;

struct dp_grid {
  dp::GridPtr grid;
};
struct dp_field {
  dp::ScalarField field;
};
struct dp_mesh {
  dp::SurfaceMesh mesh;
};
struct dp_charges {
  dp::ChargeSet charges;
};
struct dp_solve_result {
  dp::SolveResult result;
  double min_f;
  double max_f;
};
struct dp_relax_trace {
  dp::RelaxationTrace trace;
};
struct dp_verify_report {
  dp::VerifyReport report;
};

namespace {

thread_local std::string g_last_error;

dp_status to_status(dp::ErrorCode code) {
  switch (code) {
    case dp::ErrorCode::InvalidArgument: return DP_INVALID_ARGUMENT;
    case dp::ErrorCode::DomainTooSmall: return DP_DOMAIN_TOO_SMALL;
    case dp::ErrorCode::ZeroDistance: return DP_ZERO_DISTANCE;
    case dp::ErrorCode::GridMismatch: return DP_GRID_MISMATCH;
    case dp::ErrorCode::NotConverged: return DP_NOT_CONVERGED;
    case dp::ErrorCode::Stalled: return DP_STALLED;
    case dp::ErrorCode::Io: return DP_IO;
  }
  return DP_INTERNAL;
}

template <class Fn>
dp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DP_OK;
  } catch (const dp::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return DP_INTERNAL;
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw dp::Error(dp::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

dp::Vec3 vec(const double v[3]) { return {v[0], v[1], v[2]}; }

dp::Domain domain_from(const dp_domain* d) {
  need(d, "domain");
  switch (d->kind) {
    case DP_DOMAIN_BOX: return dp::Domain::box(vec(d->lo), vec(d->hi));
    case DP_DOMAIN_BALL: return dp::Domain::ball(vec(d->center), d->radius);
  }
  throw dp::Error(dp::ErrorCode::InvalidArgument, "unknown domain kind");
}

dp::Expression expr_from(const dp_expr* e) {
  need(e, "expression");
  if (e->kind < DP_EXPR_CONSTANT || e->kind > DP_EXPR_PARABOLOID)
    throw dp::Error(dp::ErrorCode::InvalidArgument, "unknown expression kind");
  dp::Expression x;
  x.kind = static_cast<dp::Expression::Kind>(e->kind);
  x.coeffs = vec(e->coeffs);
  x.offset = e->offset;
  x.point = vec(e->point);
  x.radius = e->radius;
  x.scale = e->scale;
  dp::require(std::isfinite(x.offset) && std::isfinite(x.radius) && std::isfinite(x.scale) &&
                  std::isfinite(x.coeffs.x) && std::isfinite(x.coeffs.y) && std::isfinite(x.coeffs.z) &&
                  std::isfinite(x.point.x) && std::isfinite(x.point.y) && std::isfinite(x.point.z),
              "expression parameters must be finite");
  if (x.kind == dp::Expression::Kind::BallIndicator || x.kind == dp::Expression::Kind::ShellPotential ||
      x.kind == dp::Expression::Kind::Bump)
    dp::require(x.radius > 0.0, "expression radius must be positive");
  return x;
}

std::ofstream open_out(const char* path) {
  need(path, "path");
  std::ofstream out(path);
  if (!out) throw dp::Error(dp::ErrorCode::Io, std::string("cannot write ") + path);
  return out;
}

std::ifstream open_in(const char* path) {
  need(path, "path");
  std::ifstream in(path);
  if (!in) throw dp::Error(dp::ErrorCode::Io, std::string("cannot read ") + path);
  return in;
}

void fill_report(const dp::EnergyReport& r, dp_energy_report* out) {
  out->volume_self = r.volume_self;
  out->surface_self = r.surface_self;
  out->mutual = r.mutual;
  out->total = r.total;
  out->dirichlet_interior = r.dirichlet_interior;
  out->dirichlet_exterior = r.dirichlet_exterior;
  out->complete_energy = r.complete_energy;
}

std::span<const double> panel_values(const dp_mesh* mesh, const double* sigma) {
  need(sigma, "sigma");
  return {sigma, mesh->mesh.size()};
}

dp::SolveOptions solve_options_from(const dp_solve_options* o) {
  dp::SolveOptions s;
  if (o != nullptr) {
    dp::require(std::isfinite(o->tol) && o->tol > 0.0, "solver tol must be positive");
    s.tol = o->tol;
    s.max_iter = o->max_iter;
    s.jacobi = o->jacobi != 0;
  }
  return s;
}

dp_solve_result* finish_solve(const dp::BoundaryData& f, const dp_solve_options* options) {
  auto* r = new dp_solve_result{dp::solve(f, solve_options_from(options)), f.min_boundary(), f.max_boundary()};
  return r;
}

}  // namespace

extern "C" {

const char* dp_last_error(void) { return g_last_error.c_str(); }

const char* dp_status_string(dp_status status) {
  switch (status) {
    case DP_OK: return "ok";
    case DP_INVALID_ARGUMENT: return "invalid argument";
    case DP_DOMAIN_TOO_SMALL: return "domain too small";
    case DP_ZERO_DISTANCE: return "zero distance";
    case DP_GRID_MISMATCH: return "grid mismatch";
    case DP_NOT_CONVERGED: return "not converged";
    case DP_STALLED: return "stalled";
    case DP_IO: return "i/o error";
    case DP_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void dp_set_sequential(int sequential) { dp::set_sequential(sequential != 0); }

void dp_expr_default(dp_expr* expr) {
  if (expr == nullptr) return;
  *expr = dp_expr{DP_EXPR_CONSTANT, {1.0, 0.0, 0.0}, 0.0, {0.0, 0.0, 0.0}, 1.0, 1.0};
}

dp_status dp_expr_kind_from_name(const char* name, dp_expr_kind* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<dp_expr_kind>(dp::expression_kind_from_string(name));
  });
}

dp_status dp_expr_eval(const dp_expr* expr, const double x[3], double* out) {
  return guarded([&] {
    need(x, "x");
    need(out, "out");
    *out = expr_from(expr)(vec(x));
  });
}

dp_status dp_grid_create(const dp_domain* domain, double h, double padding, dp_grid** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dp_grid{dp::build_grid(domain_from(domain), h, padding)};
  });
}

void dp_grid_free(dp_grid* grid) { delete grid; }

dp_status dp_grid_get_info(const dp_grid* grid, dp_grid_info* out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    const dp::Grid3& g = *grid->grid;
    const dp::GridCounts c = g.counts();
    for (int a = 0; a < 3; ++a) {
      out->dims[a] = g.dims()[static_cast<std::size_t>(a)];
      out->origin[a] = g.origin()[a];
    }
    out->h = g.spacing();
    out->interior = c.interior;
    out->boundary = c.boundary;
    out->exterior = c.exterior;
  });
}

dp_status dp_grid_write_json(const dp_grid* grid, const char* path) {
  return guarded([&] {
    need(grid, "grid");
    open_out(path) << dp::grid_metadata_json(*grid->grid) << '\n';
  });
}

dp_status dp_field_from_expr(const dp_grid* grid, const dp_expr* expr, dp_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    const dp::Expression e = expr_from(expr);
    *out = new dp_field{dp::ScalarField::sample(grid->grid, e)};
  });
}

dp_status dp_field_from_values(const dp_grid* grid, const double* values, size_t n, dp_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(values, "values");
    need(out, "out");
    *out = new dp_field{dp::ScalarField(grid->grid, std::vector<double>(values, values + n))};
  });
}

dp_status dp_field_read_csv(const dp_grid* grid, const char* path, dp_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    auto in = open_in(path);
    *out = new dp_field{dp::read_field_csv(grid->grid, in)};
  });
}

dp_status dp_field_write_csv(const dp_field* field, const char* path) {
  return guarded([&] {
    need(field, "field");
    auto out = open_out(path);
    dp::write_field_csv(field->field, out);
  });
}

dp_status dp_field_values(const dp_field* field, const double** values, size_t* n) {
  return guarded([&] {
    need(field, "field");
    need(values, "values");
    need(n, "n");
    *values = field->field.values.data();
    *n = field->field.values.size();
  });
}

void dp_field_free(dp_field* field) { delete field; }

void dp_mesh_free(dp_mesh* mesh) { delete mesh; }

dp_status dp_mesh_create(const dp_domain* domain, int n, dp_mesh** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dp_mesh{dp::panelize(domain_from(domain), n)};
  });
}

dp_status dp_mesh_read_csv(const char* path, dp_mesh** out) {
  return guarded([&] {
    need(out, "out");
    auto in = open_in(path);
    *out = new dp_mesh{dp::read_mesh_csv(in)};
  });
}

dp_status dp_mesh_write_csv(const dp_mesh* mesh, const char* path) {
  return guarded([&] {
    need(mesh, "mesh");
    auto out = open_out(path);
    dp::write_mesh_csv(mesh->mesh, out);
  });
}

dp_status dp_mesh_size(const dp_mesh* mesh, size_t* n, double* total_area) {
  return guarded([&] {
    need(mesh, "mesh");
    if (n != nullptr) *n = mesh->mesh.size();
    if (total_area != nullptr) *total_area = mesh->mesh.total_area();
  });
}

dp_status dp_mesh_sample_expr(const dp_mesh* mesh, const dp_expr* expr, double* out) {
  return guarded([&] {
    need(mesh, "mesh");
    need(out, "out");
    const dp::Expression e = expr_from(expr);
    for (std::size_t i = 0; i < mesh->mesh.size(); ++i) out[i] = e(mesh->mesh.panels[i].centroid);
  });
}

dp_status dp_mesh_write_values_csv(const dp_mesh* mesh, const double* values, const char* path) {
  return guarded([&] {
    need(mesh, "mesh");
    need(values, "values");
    auto out = open_out(path);
    out << "cx,cy,cz,area,nx,ny,nz,value\n";
    for (std::size_t i = 0; i < mesh->mesh.size(); ++i) {
      const dp::Panel& p = mesh->mesh.panels[i];
      dp::csv::write_row(out, {p.centroid.x, p.centroid.y, p.centroid.z, p.area, p.normal.x, p.normal.y, p.normal.z,
                               values[i]});
    }
  });
}

dp_status dp_charges_create(const double* xyz, const double* masses, size_t n, dp_charges** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) {
      need(xyz, "xyz");
      need(masses, "masses");
    }
    std::vector<dp::Vec3> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
    *out = new dp_charges{dp::ChargeSet(std::move(pos), std::vector<double>(masses, masses + n))};
  });
}

dp_status dp_charges_read_csv(const char* path, dp_charges** out) {
  return guarded([&] {
    need(out, "out");
    auto in = open_in(path);
    *out = new dp_charges{dp::read_charges_csv(in)};
  });
}

dp_status dp_charges_write_csv(const dp_charges* charges, const char* path) {
  return guarded([&] {
    need(charges, "charges");
    auto out = open_out(path);
    dp::write_charges_csv(charges->charges, out);
  });
}

dp_status dp_charges_random(const dp_domain* domain, size_t n, double mass, uint64_t seed, double margin,
                            dp_charges** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dp_charges{dp::random_charges(domain_from(domain), n, mass, seed, margin)};
  });
}

dp_status dp_charges_size(const dp_charges* charges, size_t* n) {
  return guarded([&] {
    need(charges, "charges");
    need(n, "n");
    *n = charges->charges.size();
  });
}

void dp_charges_free(dp_charges* charges) { delete charges; }

dp_status dp_coulomb_force(double m1, double m2, double r, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = dp::coulomb_force_magnitude(m1, m2, r);
  });
}

dp_status dp_assembly_energy(const dp_charges* charges, double* direct, double* via_potentials) {
  return guarded([&] {
    need(charges, "charges");
    if (direct != nullptr) *direct = dp::assembly_energy(charges->charges);
    if (via_potentials != nullptr) *via_potentials = dp::assembly_energy_via_potentials(charges->charges);
  });
}

dp_status dp_point_potential(const dp_charges* charges, const double x[3], double* out) {
  return guarded([&] {
    need(charges, "charges");
    need(x, "x");
    need(out, "out");
    *out = dp::point_potential(charges->charges, vec(x));
  });
}

dp_status dp_volume_potential(const dp_field* rho, const dp_grid* targets, dp_field** out) {
  return guarded([&] {
    need(rho, "rho");
    need(targets, "targets");
    need(out, "out");
    *out = new dp_field{dp::volume_potential(rho->field, targets->grid)};
  });
}

dp_status dp_surface_potential(const dp_mesh* mesh, const double* sigma, const dp_grid* targets, dp_field** out) {
  return guarded([&] {
    need(mesh, "mesh");
    need(targets, "targets");
    need(out, "out");
    *out = new dp_field{dp::surface_potential(mesh->mesh, panel_values(mesh, sigma), targets->grid)};
  });
}

dp_status dp_mutual_energy(const dp_field* rho, const dp_mesh* mesh, const double* sigma, double* via_volume,
                           double* via_surface) {
  return guarded([&] {
    need(rho, "rho");
    need(mesh, "mesh");
    const dp::MutualEnergy m = dp::mutual_energy(rho->field, mesh->mesh, panel_values(mesh, sigma));
    if (via_volume != nullptr) *via_volume = m.via_volume;
    if (via_surface != nullptr) *via_surface = m.via_surface;
  });
}

dp_status dp_total_energy(const dp_field* rho, const dp_mesh* mesh, const double* sigma, dp_energy_report* out) {
  return guarded([&] {
    need(out, "out");
    std::span<const double> s;
    if (mesh != nullptr) s = panel_values(mesh, sigma);
    fill_report(dp::total_energy(rho ? &rho->field : nullptr, mesh ? &mesh->mesh : nullptr, s), out);
  });
}

dp_status dp_complete_energy(const dp_field* u, int monopole_tail, dp_energy_report* out) {
  return guarded([&] {
    need(u, "u");
    need(out, "out");
    *out = dp_energy_report{};
    fill_report(dp::complete_energy(u->field, {monopole_tail != 0}), out);
  });
}

dp_status dp_energy_chain(const dp_grid* grid, const dp_expr* u, const dp_mesh* mesh, double delta,
                          dp_energy_report* out) {
  return guarded([&] {
    need(grid, "grid");
    need(mesh, "mesh");
    need(out, "out");
    const dp::Expression e = expr_from(u);
    fill_report(dp::energy_chain(e, grid->grid, mesh->mesh, delta), out);
  });
}

dp_status dp_energy_report_write_json(const dp_energy_report* report, const char* path) {
  return guarded([&] {
    need(report, "report");
    const dp::EnergyReport r{report->volume_self,        report->surface_self,       report->mutual,
                             report->total,              report->dirichlet_interior, report->dirichlet_exterior,
                             report->complete_energy};
    open_out(path) << dp::to_json(r) << '\n';
  });
}

dp_status dp_recover_volume_density(const dp_field* u, dp_field** rho, size_t* present) {
  return guarded([&] {
    need(u, "u");
    need(rho, "rho");
    dp::VolumeDensity d = dp::recover_volume_density(u->field);
    std::size_t count = 0;
    for (std::size_t n = 0; n < d.present.size(); ++n) {
      if (d.present[n])
        ++count;
      else
        d.rho.values[n] = std::numeric_limits<double>::quiet_NaN();
    }
    if (present != nullptr) *present = count;
    *rho = new dp_field{std::move(d.rho)};
  });
}

dp_status dp_recover_surface_density(const dp_mesh* mesh, const dp_expr* u, double delta, double* sigma) {
  return guarded([&] {
    need(mesh, "mesh");
    need(sigma, "sigma");
    const dp::Expression e = expr_from(u);
    const auto s = dp::recover_surface_density(dp::sample_along_normals(mesh->mesh, e, delta), mesh->mesh, delta);
    std::copy(s.begin(), s.end(), sigma);
  });
}

dp_status dp_greens_identity(const dp_field* a, const dp_field* b, double* lhs, double* rhs, double* residual) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    const dp::GreenResidual r = dp::greens_first_identity_residual(a->field, b->field);
    if (lhs != nullptr) *lhs = r.lhs;
    if (rhs != nullptr) *rhs = r.rhs;
    if (residual != nullptr) *residual = r.residual;
  });
}

void dp_solve_options_default(dp_solve_options* out) {
  if (out == nullptr) return;
  const dp::SolveOptions d;
  *out = dp_solve_options{d.tol, d.max_iter, d.jacobi ? 1 : 0};
}

dp_status dp_solve_expr(const dp_grid* grid, const dp_expr* f, const dp_solve_options* options,
                        dp_solve_result** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    const dp::Expression e = expr_from(f);
    *out = finish_solve(dp::BoundaryData::from_function(grid->grid, e), options);
  });
}

dp_status dp_solve_field(const dp_field* f, const dp_solve_options* options, dp_solve_result** out) {
  return guarded([&] {
    need(f, "f");
    need(out, "out");
    *out = finish_solve(dp::BoundaryData::from_node_values(f->field.grid, f->field.values), options);
  });
}

dp_status dp_solve_get_info(const dp_solve_result* result, dp_solve_info* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    const dp::SolveResult& r = result->result;
    *out = dp_solve_info{r.converged ? 1 : 0, r.iterations,   r.dirichlet_energy, r.harmonicity_residual,
                         r.harmonicity_bound, result->min_f, result->max_f};
  });
}

dp_status dp_solve_field_copy(const dp_solve_result* result, dp_field** out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    *out = new dp_field{result->result.field};
  });
}

dp_status dp_solve_write_json(const dp_solve_result* result, const char* path) {
  return guarded([&] {
    need(result, "result");
    open_out(path) << dp::to_json(result->result) << '\n';
  });
}

void dp_solve_result_free(dp_solve_result* result) { delete result; }

dp_status dp_dirichlet_energy(const dp_field* u, double* out) {
  return guarded([&] {
    need(u, "u");
    need(out, "out");
    *out = dp::dirichlet_energy(u->field);
  });
}

dp_status dp_dirichlet_form(const dp_field* u, const dp_field* v, double* out) {
  return guarded([&] {
    need(u, "u");
    need(v, "v");
    need(out, "out");
    *out = dp::dirichlet_form(u->field, v->field);
  });
}

dp_status dp_minimality_check(const dp_solve_result* result, size_t probes, uint64_t seed,
                              dp_minimality_info* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    const dp::SolveResult& r = result->result;
    const double amplitude = std::max(1.0, std::max(std::abs(result->min_f), std::abs(result->max_f)));
    std::vector<dp::PerturbationProbe> list;
    for (std::size_t i = 0; i < probes; ++i)
      list.push_back(dp::random_probe(r.field.grid, seed + i, amplitude, {-2.0, -0.5, 1e-3, 1.0, 3.0}));
    const dp::MinimalityCheck c = dp::minimality_check(r, list);
    *out = dp_minimality_info{c.all_pass ? 1 : 0, c.max_first_variation, c.min_relative_gain};
  });
}

void dp_relax_config_default(dp_relax_config* out) {
  if (out == nullptr) return;
  const dp::RelaxationConfig d;
  *out = dp_relax_config{d.step, d.shrink, d.max_steps, d.boundary_tol, d.grad_tol};
}

dp_status dp_relax(const dp_domain* domain, const dp_charges* charges, const dp_relax_config* config,
                   dp_relax_trace** out) {
  return guarded([&] {
    need(charges, "charges");
    need(config, "config");
    need(out, "out");
    dp::RelaxationConfig c;
    c.domain = domain_from(domain);
    c.charges = charges->charges;
    c.step = config->step;
    c.shrink = config->shrink;
    c.max_steps = config->max_steps;
    c.boundary_tol = config->boundary_tol;
    c.grad_tol = config->grad_tol;
    *out = new dp_relax_trace{dp::relax(c)};
  });
}

dp_status dp_relax_get_summary(const dp_relax_trace* trace, dp_relax_summary* out) {
  return guarded([&] {
    need(trace, "trace");
    need(out, "out");
    const dp::RelaxationTrace& t = trace->trace;
    dp_relax_summary s{};
    s.status = static_cast<dp_relax_status>(t.status);
    s.converged = t.converged ? 1 : 0;
    s.accepted_steps = t.steps.empty() ? 0 : t.steps.size() - 1;
    if (!t.steps.empty()) {
      s.initial_energy = t.steps.front().energy;
      s.final_energy = t.steps.back().energy;
      s.final_max_grad = t.steps.back().max_grad;
    }
    for (double d : t.boundary_distances) s.max_boundary_distance = std::max(s.max_boundary_distance, d);
    s.strictly_decreasing = 1;
    for (std::size_t i = 1; i < t.steps.size(); ++i)
      if (!(t.steps[i].energy < t.steps[i - 1].energy)) s.strictly_decreasing = 0;
    *out = s;
  });
}

dp_status dp_relax_final_positions(const dp_relax_trace* trace, double* xyz, size_t n) {
  return guarded([&] {
    need(trace, "trace");
    need(xyz, "xyz");
    const auto& p = trace->trace.final_positions;
    dp::require(n == p.size(), "position buffer must hold one entry per charge");
    for (std::size_t i = 0; i < n; ++i) {
      xyz[3 * i] = p[i].x;
      xyz[3 * i + 1] = p[i].y;
      xyz[3 * i + 2] = p[i].z;
    }
  });
}

dp_status dp_relax_write_csv(const dp_relax_trace* trace, const char* trace_path, const char* positions_path) {
  return guarded([&] {
    need(trace, "trace");
    auto t = open_out(trace_path);
    dp::write_trace_csv(trace->trace, t);
    auto p = open_out(positions_path);
    dp::write_positions_csv(trace->trace, p);
  });
}

void dp_relax_trace_free(dp_relax_trace* trace) { delete trace; }

void dp_verify_options_default(dp_verify_options* out) {
  if (out == nullptr) return;
  const dp::VerifyOptions d;
  *out = dp_verify_options{d.h,         d.panels,    d.surface_h,          d.tol_green,
                           d.tol_green_rate, d.tol_mutual, d.tol_chain, d.tol_poisson_volume,
                           d.tol_poisson_surface, nullptr};
}

void dp_verify_options_set_tolerance(dp_verify_options* o, double tol) {
  if (o == nullptr) return;
  o->tol_green = o->tol_green_rate = o->tol_mutual = o->tol_chain = o->tol_poisson_volume =
      o->tol_poisson_surface = tol;
}

dp_status dp_verify_run(const dp_verify_options* options, dp_verify_report** out) {
  return guarded([&] {
    need(options, "options");
    need(out, "out");
    dp::VerifyOptions o;
    o.h = options->h;
    o.panels = options->panels;
    o.surface_h = options->surface_h;
    o.tol_green = options->tol_green;
    o.tol_green_rate = options->tol_green_rate;
    o.tol_mutual = options->tol_mutual;
    o.tol_chain = options->tol_chain;
    o.tol_poisson_volume = options->tol_poisson_volume;
    o.tol_poisson_surface = options->tol_poisson_surface;
    if (options->user_field != nullptr) o.user_field = options->user_field->field;
    *out = new dp_verify_report{dp::run_verify(o)};
  });
}

dp_status dp_verify_check_count(const dp_verify_report* report, size_t* n) {
  return guarded([&] {
    need(report, "report");
    need(n, "n");
    *n = report->report.checks.size();
  });
}

dp_status dp_verify_check(const dp_verify_report* report, size_t i, const char** name, double* value,
                          double* tolerance, int* passed) {
  return guarded([&] {
    need(report, "report");
    dp::require(i < report->report.checks.size(), "check index out of range");
    const dp::VerifyCheck& c = report->report.checks[i];
    if (name != nullptr) *name = c.name.c_str();
    if (value != nullptr) *value = c.value;
    if (tolerance != nullptr) *tolerance = c.tolerance;
    if (passed != nullptr) *passed = c.passed ? 1 : 0;
  });
}

dp_status dp_verify_all_passed(const dp_verify_report* report, int* out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    *out = report->report.all_passed() ? 1 : 0;
  });
}

dp_status dp_verify_write(const dp_verify_report* report, const char* dir) {
  return guarded([&] {
    need(report, "report");
    need(dir, "dir");
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    open_out((base / "report.json").c_str()) << report->report.to_json() << '\n';
    for (const auto& t : report->report.tables) {
      auto out = open_out((base / (t.name + ".csv")).c_str());
      for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
      out << '\n';
      for (const auto& row : t.rows) dp::csv::write_row(out, row);
    }
  });
}

void dp_verify_report_free(dp_verify_report* report) { delete report; }

}  // extern "C"
