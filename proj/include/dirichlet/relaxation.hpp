#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dirichlet/electrostatics.hpp"
#include "dirichlet/geometry.hpp"

namespace dirichlet {

struct RelaxationConfig {
  Domain domain = Domain::ball({0, 0, 0}, 1.0);
  ChargeSet charges;
  double step = 0.1;
  double shrink = 0.5;
  std::size_t max_steps = 100000;
  double boundary_tol = 1e-6;
  // Backtracking on energy values cannot resolve gradients much below
  // sqrt(eps * |E| / step), so the default leaves a margin above that.
  double grad_tol = 1e-6;
};

enum class RelaxationStatus { Converged, MaxSteps, Stalled };

struct RelaxationStep {
  std::size_t step = 0;
  double energy = 0.0;
  /// Largest per-charge norm of the projected gradient.
  double max_grad = 0.0;
  /// Smallest distance from a charge to S.
  double min_boundary_distance = 0.0;
};

struct RelaxationTrace {
  /// Entry 0 is the initial configuration, then one per accepted step.
  std::vector<RelaxationStep> steps;
  std::vector<Vec3> final_positions;
  std::vector<double> boundary_distances;
  RelaxationStatus status = RelaxationStatus::MaxSteps;
  bool converged = false;

  std::vector<double> energies() const;
};

/// dE/dP_i = sum_{j != i} m_i m_j (P_j - P_i) / |P_j - P_i|^3.
std::vector<Vec3> energy_gradient(const ChargeSet& charges);

/// Projected gradient descent with backtracking: a trial step P - t grad E is
/// projected onto the closed domain and accepted only if the energy drops;
/// otherwise t shrinks. After an accepted step t grows by 1/shrink, capped at
/// config.step. Stops when the projected gradient is below grad_tol
/// (Converged), after max_steps accepted steps (MaxSteps), or when t falls
/// below 1e-15 (Stalled).
RelaxationTrace relax(const RelaxationConfig& config);

/// Columns: step,energy,max_grad,min_boundary_distance.
void write_trace_csv(const RelaxationTrace& trace, std::ostream& out);
/// Columns: x,y,z,boundary_distance.
void write_positions_csv(const RelaxationTrace& trace, std::ostream& out);

const char* to_string(RelaxationStatus status);

/// n charges of equal mass drawn uniformly from the part of the domain at
/// least `margin` inside S, rejecting draws closer than `margin` to an
/// earlier charge.
ChargeSet random_charges(const Domain& domain, std::size_t n, double mass, std::uint64_t seed, double margin);

}  // namespace dirichlet
