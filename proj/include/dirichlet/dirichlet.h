#ifndef DIRICHLET_H
#define DIRICHLET_H

/* C interface to the dirichlet library. Objects are opaque handles released
 * with the matching *_free function (NULL is accepted). Every function that
 * can fail returns a dp_status; on failure dp_last_error() describes the
 * problem for the calling thread. Units have the Coulomb constant set to 1. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DP_BUILDING_LIBRARY)
#    define DP_API __declspec(dllexport)
#  else
#    define DP_API __declspec(dllimport)
#  endif
#else
#  define DP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dp_status {
  DP_OK = 0,
  DP_INVALID_ARGUMENT = 1,
  DP_DOMAIN_TOO_SMALL = 2,
  DP_ZERO_DISTANCE = 3,
  DP_GRID_MISMATCH = 4,
  DP_NOT_CONVERGED = 5,
  DP_STALLED = 6,
  DP_IO = 7,
  DP_INTERNAL = 99
} dp_status;

typedef enum dp_domain_kind { DP_DOMAIN_BOX = 0, DP_DOMAIN_BALL = 1 } dp_domain_kind;

/* Box uses lo/hi, ball uses center/radius. */
typedef struct dp_domain {
  dp_domain_kind kind;
  double lo[3];
  double hi[3];
  double center[3];
  double radius;
} dp_domain;

typedef enum dp_expr_kind {
  DP_EXPR_CONSTANT = 0,           /* scale */
  DP_EXPR_LINEAR = 1,             /* coeffs . x + offset */
  DP_EXPR_QUADRATIC_HARMONIC = 2, /* scale (x^2 - y^2) */
  DP_EXPR_EXTERNAL_POLE = 3,      /* scale / |x - point| */
  DP_EXPR_BALL_INDICATOR = 4,     /* scale inside |x - point| < radius */
  DP_EXPR_SHELL_POTENTIAL = 5,    /* potential of density scale on sphere(point, radius) */
  DP_EXPR_BUMP = 6,               /* scale (1 - |x - point|^2 / radius^2)^4, compact */
  DP_EXPR_PARABOLOID = 7          /* -(2 pi / 3) scale |x - point|^2 */
} dp_expr_kind;

typedef struct dp_expr {
  dp_expr_kind kind;
  double coeffs[3];
  double offset;
  double point[3];
  double radius;
  double scale;
} dp_expr;

typedef struct dp_grid dp_grid;
typedef struct dp_field dp_field;
typedef struct dp_mesh dp_mesh;
typedef struct dp_charges dp_charges;
typedef struct dp_solve_result dp_solve_result;
typedef struct dp_relax_trace dp_relax_trace;
typedef struct dp_verify_report dp_verify_report;

DP_API const char* dp_last_error(void);
DP_API const char* dp_status_string(dp_status status);
/* Nonzero disables worker threads. Results are identical either way. */
DP_API void dp_set_sequential(int sequential);

/* Expressions. Names: constant, linear, quadratic-harmonic, external-pole,
 * ball-indicator, shell-potential, bump, paraboloid. */
DP_API void dp_expr_default(dp_expr* expr);
DP_API dp_status dp_expr_kind_from_name(const char* name, dp_expr_kind* out);
DP_API dp_status dp_expr_eval(const dp_expr* expr, const double x[3], double* out);

/* Grids */
typedef struct dp_grid_info {
  size_t dims[3];
  double origin[3];
  double h;
  size_t interior;
  size_t boundary;
  size_t exterior;
} dp_grid_info;

DP_API dp_status dp_grid_create(const dp_domain* domain, double h, double padding, dp_grid** out);
DP_API void dp_grid_free(dp_grid* grid);
DP_API dp_status dp_grid_get_info(const dp_grid* grid, dp_grid_info* out);
DP_API dp_status dp_grid_write_json(const dp_grid* grid, const char* path);

/* Fields (one value per grid node, NaN meaning "absent") */
DP_API dp_status dp_field_from_expr(const dp_grid* grid, const dp_expr* expr, dp_field** out);
DP_API dp_status dp_field_from_values(const dp_grid* grid, const double* values, size_t n, dp_field** out);
/* Columns x,y,z,value; unlisted nodes are NaN. */
DP_API dp_status dp_field_read_csv(const dp_grid* grid, const char* path, dp_field** out);
DP_API dp_status dp_field_write_csv(const dp_field* field, const char* path);
DP_API dp_status dp_field_values(const dp_field* field, const double** values, size_t* n);
DP_API void dp_field_free(dp_field* field);

/* Surface meshes */
DP_API dp_status dp_mesh_create(const dp_domain* domain, int n, dp_mesh** out);
/* Columns cx,cy,cz,area,nx,ny,nz. */
DP_API dp_status dp_mesh_read_csv(const char* path, dp_mesh** out);
DP_API dp_status dp_mesh_write_csv(const dp_mesh* mesh, const char* path);
DP_API dp_status dp_mesh_size(const dp_mesh* mesh, size_t* n, double* total_area);
DP_API void dp_mesh_free(dp_mesh* mesh);
/* Evaluates expr at every centroid into out[0..size). */
DP_API dp_status dp_mesh_sample_expr(const dp_mesh* mesh, const dp_expr* expr, double* out);
/* Columns cx,cy,cz,area,nx,ny,nz,value. */
DP_API dp_status dp_mesh_write_values_csv(const dp_mesh* mesh, const double* values, const char* path);

/* Point charges */
DP_API dp_status dp_charges_create(const double* xyz, const double* masses, size_t n, dp_charges** out);
/* Columns x,y,z,m. */
DP_API dp_status dp_charges_read_csv(const char* path, dp_charges** out);
DP_API dp_status dp_charges_write_csv(const dp_charges* charges, const char* path);
DP_API dp_status dp_charges_random(const dp_domain* domain, size_t n, double mass, uint64_t seed, double margin,
                                   dp_charges** out);
DP_API dp_status dp_charges_size(const dp_charges* charges, size_t* n);
DP_API void dp_charges_free(dp_charges* charges);

DP_API dp_status dp_coulomb_force(double m1, double m2, double r, double* out);
DP_API dp_status dp_assembly_energy(const dp_charges* charges, double* direct, double* via_potentials);
DP_API dp_status dp_point_potential(const dp_charges* charges, const double x[3], double* out);

/* Energies */
typedef struct dp_energy_report {
  double volume_self;
  double surface_self;
  double mutual;
  double total;
  double dirichlet_interior;
  double dirichlet_exterior;
  double complete_energy;
} dp_energy_report;

DP_API dp_status dp_volume_potential(const dp_field* rho, const dp_grid* targets, dp_field** out);
DP_API dp_status dp_surface_potential(const dp_mesh* mesh, const double* sigma, const dp_grid* targets,
                                      dp_field** out);
DP_API dp_status dp_mutual_energy(const dp_field* rho, const dp_mesh* mesh, const double* sigma, double* via_volume,
                                  double* via_surface);
/* rho or mesh may be NULL; sigma is required with mesh. */
DP_API dp_status dp_total_energy(const dp_field* rho, const dp_mesh* mesh, const double* sigma,
                                 dp_energy_report* out);
/* Fills the dirichlet_* and complete_energy members only. */
DP_API dp_status dp_complete_energy(const dp_field* u, int monopole_tail, dp_energy_report* out);
/* Samples u on the grid, recovers both densities, and evaluates every member. */
DP_API dp_status dp_energy_chain(const dp_grid* grid, const dp_expr* u, const dp_mesh* mesh, double delta,
                                 dp_energy_report* out);
DP_API dp_status dp_energy_report_write_json(const dp_energy_report* report, const char* path);

/* Recovery and identities */
/* rho is NaN at nodes without a one-sided complete stencil. */
DP_API dp_status dp_recover_volume_density(const dp_field* u, dp_field** rho, size_t* present);
DP_API dp_status dp_recover_surface_density(const dp_mesh* mesh, const dp_expr* u, double delta, double* sigma);
DP_API dp_status dp_greens_identity(const dp_field* a, const dp_field* b, double* lhs, double* rhs, double* residual);

/* Variational solver */
typedef struct dp_solve_options {
  double tol;      /* max |A u - b| <= tol (1 + max|f|), A the h^2-scaled 7-point operator */
  size_t max_iter; /* 0 selects 10 N^(2/3) */
  int jacobi;
} dp_solve_options;

typedef struct dp_solve_info {
  int converged;
  size_t iterations;
  double dirichlet_energy;
  double harmonicity_residual;
  double harmonicity_bound;
  double min_f;
  double max_f;
} dp_solve_info;

DP_API void dp_solve_options_default(dp_solve_options* out);
/* Returns DP_OK even when the iteration did not converge; check info.converged. */
DP_API dp_status dp_solve_expr(const dp_grid* grid, const dp_expr* f, const dp_solve_options* options,
                               dp_solve_result** out);
/* Boundary values from a field; every Boundary node must be finite. */
DP_API dp_status dp_solve_field(const dp_field* f, const dp_solve_options* options, dp_solve_result** out);
DP_API dp_status dp_solve_get_info(const dp_solve_result* result, dp_solve_info* out);
DP_API dp_status dp_solve_field_copy(const dp_solve_result* result, dp_field** out);
DP_API dp_status dp_solve_write_json(const dp_solve_result* result, const char* path);
DP_API void dp_solve_result_free(dp_solve_result* result);

DP_API dp_status dp_dirichlet_energy(const dp_field* u, double* out);
DP_API dp_status dp_dirichlet_form(const dp_field* u, const dp_field* v, double* out);

typedef struct dp_minimality_info {
  int all_pass;
  double max_first_variation;
  double min_relative_gain;
} dp_minimality_info;

/* Random boundary-vanishing probes seeded with seed, seed + 1, ... */
DP_API dp_status dp_minimality_check(const dp_solve_result* result, size_t probes, uint64_t seed,
                                     dp_minimality_info* out);

/* Relaxation */
typedef struct dp_relax_config {
  double step;
  double shrink;
  size_t max_steps;
  double boundary_tol;
  double grad_tol;
} dp_relax_config;

typedef enum dp_relax_status { DP_RELAX_CONVERGED = 0, DP_RELAX_MAX_STEPS = 1, DP_RELAX_STALLED = 2 } dp_relax_status;

typedef struct dp_relax_summary {
  dp_relax_status status;
  int converged;
  size_t accepted_steps;
  double initial_energy;
  double final_energy;
  double final_max_grad;
  double max_boundary_distance;
  int strictly_decreasing;
} dp_relax_summary;

DP_API void dp_relax_config_default(dp_relax_config* out);
DP_API dp_status dp_relax(const dp_domain* domain, const dp_charges* charges, const dp_relax_config* config,
                          dp_relax_trace** out);
DP_API dp_status dp_relax_get_summary(const dp_relax_trace* trace, dp_relax_summary* out);
DP_API dp_status dp_relax_final_positions(const dp_relax_trace* trace, double* xyz, size_t n);
DP_API dp_status dp_relax_write_csv(const dp_relax_trace* trace, const char* trace_path, const char* positions_path);
DP_API void dp_relax_trace_free(dp_relax_trace* trace);

/* Identity verification suite */
typedef struct dp_verify_options {
  double h;
  int panels;
  double surface_h;
  double tol_green;
  double tol_green_rate;
  double tol_mutual;
  double tol_chain;
  double tol_poisson_volume;
  double tol_poisson_surface;
  const dp_field* user_field; /* optional */
} dp_verify_options;

DP_API void dp_verify_options_default(dp_verify_options* out);
/* Sets every tolerance to tol. */
DP_API void dp_verify_options_set_tolerance(dp_verify_options* options, double tol);
DP_API dp_status dp_verify_run(const dp_verify_options* options, dp_verify_report** out);
DP_API dp_status dp_verify_check_count(const dp_verify_report* report, size_t* n);
DP_API dp_status dp_verify_check(const dp_verify_report* report, size_t i, const char** name, double* value,
                                 double* tolerance, int* passed);
DP_API dp_status dp_verify_all_passed(const dp_verify_report* report, int* out);
/* Writes report.json and one <table>.csv per study table into dir. */
DP_API dp_status dp_verify_write(const dp_verify_report* report, const char* dir);
DP_API void dp_verify_report_free(dp_verify_report* report);

#ifdef __cplusplus
}
#endif

#endif /* DIRICHLET_H */
