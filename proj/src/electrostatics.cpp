#include "dirichlet/electrostatics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "dirichlet/csv.hpp"
#include "dirichlet/error.hpp"

namespace dirichlet {

namespace {

[[noreturn]] void zero_distance(std::size_t i, std::size_t j) {
  std::ostringstream msg;
  msg << "charges " << i << " and " << j << " coincide";
  throw Error(ErrorCode::ZeroDistance, msg.str());
}

}  // namespace

ChargeSet::ChargeSet(std::vector<Vec3> positions, std::vector<double> masses)
    : positions_(std::move(positions)), masses_(std::move(masses)) {
  require(positions_.size() == masses_.size(), "positions and masses must have equal length");
  for (std::size_t i = 0; i < size(); ++i) {
    const Vec3& p = positions_[i];
    require(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z) && std::isfinite(masses_[i]),
            "charge " + std::to_string(i) + " is not finite");
    for (std::size_t j = 0; j < i; ++j)
      if (positions_[j] == p) zero_distance(j, i);
  }
}

ChargeSet ChargeSet::without(std::size_t i) const {
  require(i < size(), "charge index out of range");
  ChargeSet out;
  out.positions_ = positions_;
  out.masses_ = masses_;
  out.positions_.erase(out.positions_.begin() + static_cast<std::ptrdiff_t>(i));
  out.masses_.erase(out.masses_.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

ChargeSet ChargeSet::with_positions(std::vector<Vec3> positions) const {
  return ChargeSet(std::move(positions), masses_);
}

double coulomb_force_magnitude(double m1, double m2, double r) {
  if (r == 0.0) throw Error(ErrorCode::ZeroDistance, "coulomb force at zero distance");
  require(r > 0.0 && std::isfinite(r), "distance must be positive");
  return m1 * m2 / (r * r);
}

double assembly_energy(const ChargeSet& charges) {
  const auto p = charges.positions();
  const auto m = charges.masses();
  // Sequential assembly: charge i is brought in against the field of 0..i-1.
  double e = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    double work = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double r = distance(p[i], p[j]);
      if (r == 0.0) zero_distance(j, i);
      work += m[j] / r;
    }
    e += m[i] * work;
  }
  return e;
}

double point_potential(const ChargeSet& charges, const Vec3& x) {
  const auto p = charges.positions();
  const auto m = charges.masses();
  double u = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double r = distance(x, p[j]);
    if (r == 0.0) throw Error(ErrorCode::ZeroDistance, "potential evaluated at charge " + std::to_string(j));
    u += m[j] / r;
  }
  return u;
}

double assembly_energy_via_potentials(const ChargeSet& charges) {
  const auto p = charges.positions();
  const auto m = charges.masses();
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) e += m[i] * point_potential(charges.without(i), p[i]);
  return 0.5 * e;
}

ChargeSet read_charges_csv(std::istream& in) {
  std::vector<Vec3> pos;
  std::vector<double> mass;
  for (const auto& row : csv::read_numeric(in, {"x", "y", "z", "m"})) {
    pos.push_back({row[0], row[1], row[2]});
    mass.push_back(row[3]);
  }
  return ChargeSet(std::move(pos), std::move(mass));
}

void write_charges_csv(const ChargeSet& charges, std::ostream& out) {
  out << "x,y,z,m\n";
  for (std::size_t i = 0; i < charges.size(); ++i) {
    const Vec3& p = charges.positions()[i];
    csv::write_row(out, {p.x, p.y, p.z, charges.masses()[i]});
  }
}

}  // namespace dirichlet
