#pragma once

#include <string>

namespace dirichlet {

/// Decomposition of the electrostatic energy of a volume density plus a
/// surface lamina, and of its Dirichlet-integral form.
struct EnergyReport {
  double volume_self = 0.0;
  double surface_self = 0.0;
  double mutual = 0.0;
  /// volume_self + surface_self + mutual.
  double total = 0.0;
  /// Integral of |grad U|^2 over Omega.
  double dirichlet_interior = 0.0;
  /// Integral of |grad U|^2 over the exterior, including the far-field tail.
  double dirichlet_exterior = 0.0;
  /// (dirichlet_interior + dirichlet_exterior) / (8 pi).
  double complete_energy = 0.0;
};

std::string to_json(const EnergyReport& report);

}  // namespace dirichlet
