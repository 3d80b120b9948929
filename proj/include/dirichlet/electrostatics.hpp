#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "dirichlet/vec3.hpp"

namespace dirichlet {

/// Finite set of point charges with signed "electrical masses". Units have the
/// Coulomb constant set to one.
class ChargeSet {
 public:
  ChargeSet() = default;
  /// Throws InvalidArgument on length mismatch or non-finite input, and
  /// ZeroDistance if two positions coincide.
  ChargeSet(std::vector<Vec3> positions, std::vector<double> masses);

  std::size_t size() const { return positions_.size(); }
  std::span<const Vec3> positions() const { return positions_; }
  std::span<const double> masses() const { return masses_; }

  /// Copy with charge `i` removed.
  ChargeSet without(std::size_t i) const;
  /// Copy with positions replaced (masses kept). Re-validates distinctness.
  ChargeSet with_positions(std::vector<Vec3> positions) const;

 private:
  std::vector<Vec3> positions_;
  std::vector<double> masses_;
};

/// |F| = m1 m2 / r^2.
double coulomb_force_magnitude(double m1, double m2, double r);

/// Work to bring the charges in from infinity one after another:
/// 1/2 sum_{i != j} m_i m_j / r_ij.
double assembly_energy(const ChargeSet& charges);

/// Potential at x of the whole set: sum_j m_j / |x - P_j|.
double point_potential(const ChargeSet& charges, const Vec3& x);

/// 1/2 sum_i m_i U_i(P_i) where U_i is the potential of all other charges.
double assembly_energy_via_potentials(const ChargeSet& charges);

/// CSV with columns x,y,z,m.
ChargeSet read_charges_csv(std::istream& in);
void write_charges_csv(const ChargeSet& charges, std::ostream& out);

}  // namespace dirichlet
