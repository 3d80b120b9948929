#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirichlet/geometry.hpp"

namespace dirichlet {

/// Parameters of the identity-verification suite. Every check is of the form
/// `value <= tolerance`; the suite runs at `h` and `h / 2`.
struct VerifyOptions {
  double h = 0.05;
  /// Sphere panel resolution at the coarse level (doubled at the fine level).
  int panels = 63;
  /// Grid spacing for surface-density recovery; probes sit at 2 * surface_h.
  double surface_h = 0.02;

  double tol_green = 0.02;
  /// Bound on residual(h/2) / residual(h) for a generic smooth pair.
  double tol_green_rate = 1.0 / 1.5;
  double tol_mutual = 0.02;
  double tol_chain = 0.05;
  double tol_poisson_volume = 1e-10;
  double tol_poisson_surface = 0.02;

  /// Optional user field on a grid; checked with Green's identity for A = B = U.
  std::optional<ScalarField> user_field;
};

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Plot-ready study table.
struct VerifyTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::vector<VerifyTable> tables;

  bool all_passed() const;
  std::string to_json() const;
};

/// Sets every tolerance to `tol`.
void override_tolerances(VerifyOptions& options, double tol);

/// Throws InvalidArgument on out-of-range parameters or a non-finite user field.
void validate(const VerifyOptions& options);

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace dirichlet
