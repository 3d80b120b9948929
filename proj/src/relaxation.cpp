#include "dirichlet/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "dirichlet/csv.hpp"
#include "dirichlet/error.hpp"

namespace dirichlet {

namespace {

constexpr double kMinStep = 1e-15;

struct Snapshot {
  double max_grad = 0.0;
  double min_distance = 0.0;
};

Snapshot snapshot(const Domain& domain, const ChargeSet& charges, const std::vector<Vec3>& grad, double tol) {
  Snapshot s;
  s.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < charges.size(); ++i) {
    const Vec3& p = charges.positions()[i];
    // Feasible descent direction, negated back to a gradient.
    const Vec3 pg = domain.tangent_cone(p, -grad[i], tol);
    s.max_grad = std::max(s.max_grad, norm(pg));
    s.min_distance = std::min(s.min_distance, std::abs(domain.signed_distance(p)));
  }
  if (charges.size() == 0) s.min_distance = 0.0;
  return s;
}

}  // namespace

std::vector<double> RelaxationTrace::energies() const {
  std::vector<double> e;
  e.reserve(steps.size());
  for (const auto& s : steps) e.push_back(s.energy);
  return e;
}

std::vector<Vec3> energy_gradient(const ChargeSet& charges) {
  const auto p = charges.positions();
  const auto m = charges.masses();
  std::vector<Vec3> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const Vec3 d = p[j] - p[i];
      const double r = norm(d);
      if (r == 0.0) throw Error(ErrorCode::ZeroDistance, "charges coincide in gradient");
      const Vec3 t = d * (m[i] * m[j] / (r * r * r));
      g[i] += t;
      g[j] -= t;
    }
  }
  return g;
}

RelaxationTrace relax(const RelaxationConfig& config) {
  require(config.step > 0.0 && std::isfinite(config.step), "step must be positive");
  require(config.shrink > 0.0 && config.shrink < 1.0, "shrink must lie in (0, 1)");
  require(config.boundary_tol > 0.0 && config.grad_tol > 0.0, "tolerances must be positive");
  const Domain& domain = config.domain;
  const auto masses = config.charges.masses();
  for (std::size_t i = 0; i < config.charges.size(); ++i) {
    require(domain.contains(config.charges.positions()[i]),
            "charge " + std::to_string(i) + " does not start strictly inside the domain");
    require(masses[i] != 0.0 && (masses[i] > 0.0) == (masses[0] > 0.0),
            "relaxation requires nonzero masses of one sign");
  }

  // Points projected onto S sit there up to rounding.
  const double active_tol = 1e-12 * domain.feature_size();
  ChargeSet current = config.charges;
  double energy = assembly_energy(current);
  double t = config.step;

  RelaxationTrace trace;
  std::vector<Vec3> grad = energy_gradient(current);
  Snapshot snap = snapshot(domain, current, grad, active_tol);
  trace.steps.push_back({0, energy, snap.max_grad, snap.min_distance});

  for (;;) {
    if (snap.max_grad <= config.grad_tol) {
      trace.status = RelaxationStatus::Converged;
      break;
    }
    if (trace.steps.size() - 1 >= config.max_steps) {
      trace.status = RelaxationStatus::MaxSteps;
      break;
    }
    bool accepted = false;
    while (t >= kMinStep) {
      std::vector<Vec3> trial(current.size());
      bool distinct = true;
      for (std::size_t i = 0; i < current.size(); ++i)
        trial[i] = domain.project(current.positions()[i] - grad[i] * t);
      for (std::size_t i = 0; i < trial.size() && distinct; ++i)
        for (std::size_t j = 0; j < i && distinct; ++j) distinct = !(trial[i] == trial[j]);
      if (distinct) {
        ChargeSet next = current.with_positions(std::move(trial));
        const double e = assembly_energy(next);
        if (e < energy) {
          current = std::move(next);
          energy = e;
          accepted = true;
          t = std::min(config.step, t / config.shrink);
          break;
        }
      }
      t *= config.shrink;
    }
    if (!accepted) {
      trace.status = RelaxationStatus::Stalled;
      break;
    }
    grad = energy_gradient(current);
    snap = snapshot(domain, current, grad, active_tol);
    trace.steps.push_back({trace.steps.size(), energy, snap.max_grad, snap.min_distance});
  }

  trace.converged = trace.status == RelaxationStatus::Converged;
  trace.final_positions.assign(current.positions().begin(), current.positions().end());
  for (const Vec3& p : trace.final_positions) trace.boundary_distances.push_back(std::abs(domain.signed_distance(p)));
  return trace;
}

void write_trace_csv(const RelaxationTrace& trace, std::ostream& out) {
  out << "step,energy,max_grad,min_boundary_distance\n";
  for (const auto& s : trace.steps)
    csv::write_row(out, {static_cast<double>(s.step), s.energy, s.max_grad, s.min_boundary_distance});
}

void write_positions_csv(const RelaxationTrace& trace, std::ostream& out) {
  out << "x,y,z,boundary_distance\n";
  for (std::size_t i = 0; i < trace.final_positions.size(); ++i) {
    const Vec3& p = trace.final_positions[i];
    csv::write_row(out, {p.x, p.y, p.z, trace.boundary_distances[i]});
  }
}

const char* to_string(RelaxationStatus status) {
  switch (status) {
    case RelaxationStatus::Converged: return "converged";
    case RelaxationStatus::MaxSteps: return "max_steps";
    case RelaxationStatus::Stalled: return "stalled";
  }
  return "unknown";
}

ChargeSet random_charges(const Domain& domain, std::size_t n, double mass, std::uint64_t seed, double margin) {
  require(std::isfinite(mass) && mass != 0.0, "charge mass must be finite and nonzero");
  require(std::isfinite(margin) && margin >= 0.0, "margin must be nonnegative");
  require(2.0 * margin < domain.feature_size(), "margin leaves no room inside the domain");
  std::mt19937_64 rng(seed);
  const Vec3 lo = domain.bounds_lo();
  const Vec3 hi = domain.bounds_hi();
  std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y), uz(lo.z, hi.z);
  std::vector<Vec3> pos;
  std::size_t attempts = 0;
  while (pos.size() < n) {
    require(++attempts <= 1000 * (n + 1), "could not place charges at the requested separation");
    const Vec3 p{ux(rng), uy(rng), uz(rng)};
    if (!domain.contains(p, margin)) continue;
    const bool clear =
        std::none_of(pos.begin(), pos.end(), [&](const Vec3& q) { return distance(p, q) < std::max(margin, 1e-12); });
    if (clear) pos.push_back(p);
  }
  return ChargeSet(std::move(pos), std::vector<double>(n, mass));
}

}  // namespace dirichlet
