#pragma once

#include <span>
#include <vector>

#include "dirichlet/energy_report.hpp"
#include "dirichlet/geometry.hpp"

namespace dirichlet {

/// Integral of 1/r over the cube [-1/2, 1/2]^3, from the centre. The self-cell
/// contribution of a uniform cell of side h is rho * h^2 * kCubeSelfIntegral.
inline constexpr double kCubeSelfIntegral = 2.3800773639795535;

/// Integral of 1/|x - y| dA(y) over a flat disc of radius `a`, for a target at
/// height `z` above the disc plane whose projection is `s` from the disc
/// centre. Exact for s == 0; otherwise a 1-D angular rule around the
/// projection point (the radial integral is done in closed form).
double disc_kernel_integral(double a, double s, double z);

/// Newtonian potential of a nodal volume density (each node owns a cube of side
/// h). Targets within half a cell of a source node use the analytic self-cell
/// value.
std::vector<double> volume_potential(const ScalarField& rho, std::span<const Vec3> targets);
ScalarField volume_potential(const ScalarField& rho, GridPtr targets);

/// Single-layer potential of panel densities `sigma`. Panels whose centroid is
/// closer than sqrt(area) to the target are integrated as flat discs of equal
/// area.
std::vector<double> surface_potential(const SurfaceMesh& mesh, std::span<const double> sigma,
                                      std::span<const Vec3> targets);
ScalarField surface_potential(const SurfaceMesh& mesh, std::span<const double> sigma, GridPtr targets);

/// 1/2 sum_cells rho U_vol h^3.
double volume_self_energy(const ScalarField& rho);
/// 1/2 sum_panels sigma U_S area.
double surface_self_energy(const SurfaceMesh& mesh, std::span<const double> sigma);

struct MutualEnergy {
  /// sum_cells rho U_S h^3
  double via_volume = 0.0;
  /// sum_panels sigma U_vol area
  double via_surface = 0.0;
};

MutualEnergy mutual_energy(const ScalarField& rho, const SurfaceMesh& mesh, std::span<const double> sigma);

/// Fills volume_self, surface_self, mutual (mean of the two quadratures) and
/// total. `rho` may be empty (no grid) and `sigma` may be empty.
EnergyReport total_energy(const ScalarField* rho, const SurfaceMesh* mesh, std::span<const double> sigma);

}  // namespace dirichlet
