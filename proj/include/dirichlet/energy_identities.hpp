#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dirichlet/energy_report.hpp"
#include "dirichlet/geometry.hpp"

namespace dirichlet {

/// (sum of 6 neighbours - 6 U) / h^2 at a node with a full stencil.
double laplacian_7pt(const ScalarField& u, std::size_t node);

struct VolumeDensity {
  ScalarField rho;
  /// Nodes where rho was evaluated. Absent nodes hold 0.
  std::vector<bool> present;
};

/// rho = -Lap_h U / (4 pi) at every node whose 7-point stencil lies inside the
/// grid and on one side of S (all Interior, or all non-Interior).
VolumeDensity recover_volume_density(const ScalarField& u);

/// Potential samples along each panel normal: on S and at offsets delta and
/// 2 delta on either side.
struct NormalSamples {
  std::vector<double> surface;
  std::vector<double> outside_near;  // +delta
  std::vector<double> outside_far;   // +2 delta
  std::vector<double> inside_near;   // -delta
  std::vector<double> inside_far;    // -2 delta
};

using PotentialFn = std::function<double(const Vec3&)>;

/// Evaluates `u` at the points used by recover_surface_density.
NormalSamples sample_along_normals(const SurfaceMesh& mesh, const PotentialFn& u, double delta);

/// sigma = -(dU/dn+ - dU/dn-) / (4 pi), both derivatives taken along the
/// outward normal with second-order one-sided differences.
std::vector<double> recover_surface_density(const NormalSamples& samples, const SurfaceMesh& mesh, double delta);

struct GreenResidual {
  double lhs = 0.0;  // surface flux term  sum A dB/dn dS
  double rhs = 0.0;  // sum A Lap B dV + sum grad A . grad B dV
  double residual = 0.0;
};

/// Discrete Green's first identity over the control volumes of the Interior
/// nodes. The surface term lives on faces between Interior and Boundary nodes,
/// using the face-averaged A and the one-sided normal difference of B.
GreenResidual greens_first_identity_residual(const ScalarField& a, const ScalarField& b);

struct CompleteEnergyOptions {
  /// Adds the analytic exterior integral of |grad(Q/r)|^2 outside the grid box,
  /// with Q the charge enclosed by the grid (Gauss flux).
  bool monopole_tail = true;
};

/// Dirichlet integrals of U split at S, and E = (D_int + D_ext) / (8 pi).
/// Only the dirichlet_* and complete_energy fields are filled.
EnergyReport complete_energy(const ScalarField& u, const CompleteEnergyOptions& options = {});

/// The full chain for a potential U given as a function: sample on `grid`,
/// recover rho and sigma, evaluate total_energy of the recovered densities and
/// complete_energy of U. Panels use probe offset `delta`.
EnergyReport energy_chain(const PotentialFn& u, GridPtr grid, const SurfaceMesh& mesh, double delta,
                          const CompleteEnergyOptions& options = {});

}  // namespace dirichlet
