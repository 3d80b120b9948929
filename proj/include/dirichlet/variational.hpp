#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dirichlet/geometry.hpp"

namespace dirichlet {

/// Prescribed values f on the non-Interior nodes of a grid. Every Boundary node
/// carries a value; Exterior nodes carry either a sample of f or a value copied
/// from neighbouring Boundary nodes. Only Boundary values enter the solve;
/// Exterior values only affect the energy of edges lying on S.
class BoundaryData {
 public:
  /// Samples f at every non-Interior node.
  static BoundaryData from_function(GridPtr grid, const std::function<double(const Vec3&)>& f);
  /// Takes Boundary values from `values` (indexed by node; Interior and
  /// Exterior entries ignored). Throws InvalidArgument naming the first
  /// Boundary node whose value is missing (NaN) or non-finite.
  static BoundaryData from_node_values(GridPtr grid, const std::vector<double>& values);

  const GridPtr& grid() const { return grid_; }
  /// Full-grid vector; Interior entries are zero.
  const std::vector<double>& values() const { return values_; }
  double min_boundary() const;
  double max_boundary() const;

 private:
  BoundaryData(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {}
  GridPtr grid_;
  std::vector<double> values_;
};

/// Weight of the grid edge from `node` along +axis in the Dirichlet-energy
/// quadrature: 1 when either end is Interior, otherwise the fraction of the
/// four adjacent cells whose centre lies in Omega.
double edge_weight(const Grid3& grid, std::size_t node, int axis);

/// D(U) = sum over edges of weight * ((dU)/h)^2 * h^3. The Interior unknowns
/// only touch unit-weight edges, so the Euler-Lagrange equation of D is the
/// 7-point Laplacian.
double dirichlet_energy(const ScalarField& u);

/// Symmetric bilinear form with dirichlet_form(u, u) == dirichlet_energy(u).
/// Throws GridMismatch when the fields live on different grids.
double dirichlet_form(const ScalarField& u, const ScalarField& v);

struct SolveOptions {
  /// Stop when max_i |(A u - b)_i| <= tol * (1 + max|f|), with A the
  /// h^2-scaled 7-point operator on the Interior unknowns.
  double tol = 1e-10;
  /// 0 selects the default 10 * N^(2/3), N the Interior node count.
  std::size_t max_iter = 0;
  bool jacobi = false;
  /// Interior start values (full-grid vector); zero when absent.
  std::optional<std::vector<double>> initial;
};

struct SolveResult {
  ScalarField field;
  double dirichlet_energy = 0.0;
  /// max over Interior of |Lap_h u|.
  double harmonicity_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// tol * (1 + max|f|) / h^2: the bound harmonicity_residual meets when
  /// converged.
  double harmonicity_bound = 0.0;
};

/// Scalars of a result as JSON (the field itself goes to CSV).
std::string to_json(const SolveResult& result);

std::size_t default_max_iterations(const Grid3& grid);

/// Minimizes D over fields equal to f off the Interior by conjugate gradients.
/// Never throws on non-convergence: the best iterate is returned with
/// converged == false.
SolveResult solve(const BoundaryData& f, const SolveOptions& options = {});

/// A perturbation h vanishing off the Interior, and scalars x.
struct PerturbationProbe {
  ScalarField h_field;
  std::vector<double> x_samples;
};

/// Throws InvalidArgument when h is nonzero at a Boundary or Exterior node.
void validate_probe(const PerturbationProbe& probe);

/// Random boundary-vanishing probe with Interior values uniform in [-amplitude, amplitude].
PerturbationProbe random_probe(GridPtr grid, std::uint64_t seed, double amplitude,
                               std::vector<double> x_samples);

struct ExpansionCheck {
  double max_abs_deviation = 0.0;
  /// max |dev| / (1 + |D(u + x h)|)
  double max_rel_deviation = 0.0;
};

/// Compares D(u + x h) against D(u) + 2 x D(u, h) + x^2 D(h).
ExpansionCheck perturbation_expansion_check(const ScalarField& u, const PerturbationProbe& probe);

struct MinimalityOptions {
  double energy_tol = 1e-10;
  double first_variation_tol = 1e-8;
};

struct MinimalityCheck {
  bool all_pass = true;
  /// max |D(u, h)| / sqrt(D(u) D(h))
  double max_first_variation = 0.0;
  /// min (D(u + x h) - D(u)) / (D(u) + x^2 D(h))
  double min_relative_gain = 0.0;
};

/// D(u + x h) >= D(u) - energy_tol * scale and |D(u, h)| <= first_variation_tol *
/// sqrt(D(u) D(h)) for every probe and x.
MinimalityCheck minimality_check(const SolveResult& result, const std::vector<PerturbationProbe>& probes,
                                 const MinimalityOptions& options = {});

/// Admissible comparison field: every Interior node takes the f value of its
/// nearest Boundary node (ties broken by node index).
ScalarField nearest_boundary_extension(const BoundaryData& f);

}  // namespace dirichlet
