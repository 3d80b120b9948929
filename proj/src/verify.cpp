#include "dirichlet/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "dirichlet/energy_identities.hpp"
#include "dirichlet/error.hpp"
#include "dirichlet/potential_fields.hpp"
#include "json.hpp"

namespace dirichlet {

namespace {

constexpr double kPi = std::numbers::pi;

void add(VerifyReport& report, std::string name, double value, double tol) {
  report.checks.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
}

GreenResidual green_on_unit_cube(double h, double (*a)(const Vec3&), double (*b)(const Vec3&)) {
  const GridPtr g = build_grid(Domain::box({0, 0, 0}, {1, 1, 1}), h, 0.0);
  return greens_first_identity_residual(ScalarField::sample(g, a), ScalarField::sample(g, b));
}

double bump(const Vec3& p) {
  constexpr double a = 0.4;
  const double s = dot(p, p) / (a * a);
  return s < 1.0 ? std::pow(1.0 - s, 4) : 0.0;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["all_passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  j["tables"] = nlohmann::json::array();
  for (const auto& t : tables) j["tables"].push_back(t.name);
  return j.dump(2);
}

void override_tolerances(VerifyOptions& o, double tol) {
  o.tol_green = o.tol_green_rate = o.tol_mutual = o.tol_chain = o.tol_poisson_volume = o.tol_poisson_surface = tol;
}

void validate(const VerifyOptions& o) {
  require(std::isfinite(o.h) && o.h > 0.0 && o.h <= 0.25, "verify: h must lie in (0, 0.25]");
  require(o.panels >= 4 && o.panels <= 400, "verify: panels must lie in [4, 400]");
  require(std::isfinite(o.surface_h) && o.surface_h > 0.0 && o.surface_h < 0.1,
          "verify: surface_h must lie in (0, 0.1)");
  for (double t : {o.tol_green, o.tol_green_rate, o.tol_mutual, o.tol_chain, o.tol_poisson_volume,
                   o.tol_poisson_surface})
    require(std::isfinite(t) && t >= 0.0, "verify: tolerances must be finite and nonnegative");
  if (o.user_field) {
    require(o.user_field->grid != nullptr, "verify: user field has no grid");
    for (std::size_t n = 0; n < o.user_field->values.size(); ++n)
      require(std::isfinite(o.user_field->values[n]),
              "verify: user field is not finite at node " + std::to_string(n));
  }
}

VerifyReport run_verify(const VerifyOptions& o) {
  validate(o);
  VerifyReport report;
  const std::array<double, 2> hs{o.h, 0.5 * o.h};
  const std::array<int, 2> ns{o.panels, 2 * o.panels};

  // Green's first identity on the unit cube.
  {
    VerifyTable table{"green_study", {"pair", "h", "lhs", "rhs", "residual"}, {}};
    double worst = 0.0;
    std::array<double, 2> generic{};
    for (std::size_t l = 0; l < 2; ++l) {
      const GreenResidual r = green_on_unit_cube(
          hs[l], [](const Vec3& p) { return p.x * p.x; }, [](const Vec3& p) { return p.y * p.y; });
      table.rows.push_back({0, hs[l], r.lhs, r.rhs, r.residual});
      worst = std::max(worst, std::abs(r.residual));
      const GreenResidual s = green_on_unit_cube(
          hs[l], [](const Vec3& p) { return std::sin(p.x) + p.y * p.z; },
          [](const Vec3& p) { return std::exp(p.x) * std::cos(p.y) + p.z * p.z; });
      table.rows.push_back({1, hs[l], s.lhs, s.rhs, s.residual});
      generic[l] = std::abs(s.residual);
    }
    add(report, "green_x2_y2_residual", worst, o.tol_green);
    add(report, "green_generic_refinement_ratio", generic[1] / generic[0], o.tol_green_rate);
    report.tables.push_back(std::move(table));
  }

  // Mutual energy: uniform ball r = 0.5 inside a uniformly charged unit sphere.
  {
    VerifyTable table{"mutual_study", {"h", "panels", "via_volume", "via_surface", "relative_gap"}, {}};
    double worst = 0.0;
    const Domain inner = Domain::ball({0, 0, 0}, 0.5);
    for (std::size_t l = 0; l < 2; ++l) {
      const GridPtr g = build_grid(inner, hs[l], 0.0);
      const ScalarField rho =
          ScalarField::sample(g, [&](const Vec3& p) { return inner.contains(p) ? 1.0 : 0.0; });
      const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), ns[l]);
      const std::vector<double> sigma(mesh.size(), 1.0);
      const MutualEnergy m = mutual_energy(rho, mesh, sigma);
      const double gap = std::abs(m.via_volume - m.via_surface) / std::abs(0.5 * (m.via_volume + m.via_surface));
      table.rows.push_back({hs[l], static_cast<double>(mesh.size()), m.via_volume, m.via_surface, gap});
      worst = std::max(worst, gap);
    }
    add(report, "mutual_energy_gap", worst, o.tol_mutual);
    report.tables.push_back(std::move(table));
  }

  // Energy chain for a compactly supported bump.
  {
    VerifyTable table{"energy_chain_study", {"h", "total", "complete_energy", "relative_gap"}, {}};
    double worst = 0.0;
    const Domain omega = Domain::ball({0, 0, 0}, 1.0);
    for (std::size_t l = 0; l < 2; ++l) {
      const GridPtr g = build_grid(omega, hs[l], 2.0 * hs[l]);
      const SurfaceMesh mesh = panelize(omega, 16);
      const EnergyReport r = energy_chain(bump, g, mesh, 2.0 * hs[l]);
      const double gap = std::abs(r.total - r.complete_energy) / r.complete_energy;
      table.rows.push_back({hs[l], r.total, r.complete_energy, gap});
      worst = std::max(worst, gap);
    }
    add(report, "energy_chain_gap", worst, o.tol_chain);
    report.tables.push_back(std::move(table));
  }

  // Poisson recovery, volume: U = -(2 pi / 3) r^2 has rho = 1.
  {
    double worst = 0.0;
    for (double h : hs) {
      const GridPtr g = build_grid(Domain::box({-1, -1, -1}, {1, 1, 1}), h, 0.0);
      const VolumeDensity d =
          recover_volume_density(ScalarField::sample(g, [](const Vec3& p) { return -2.0 * kPi / 3.0 * dot(p, p); }));
      for (std::size_t n = 0; n < g->size(); ++n)
        if (d.present[n]) worst = std::max(worst, std::abs(d.rho[n] - 1.0));
    }
    add(report, "poisson_volume_max_error", worst, o.tol_poisson_volume);
  }

  // Poisson recovery, surface: uniform unit sphere, sigma = 1.
  {
    VerifyTable table{"surface_density", {"panel", "cx", "cy", "cz", "sigma"}, {}};
    const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), o.panels);
    const double delta = 2.0 * o.surface_h;
    const PotentialFn shell = [](const Vec3& p) {
      const double r = norm(p);
      return r <= 1.0 ? 4.0 * kPi : 4.0 * kPi / r;
    };
    const auto sigma = recover_surface_density(sample_along_normals(mesh, shell, delta), mesh, delta);
    double worst = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      worst = std::max(worst, std::abs(sigma[i] - 1.0));
      const Vec3& c = mesh.panels[i].centroid;
      table.rows.push_back({static_cast<double>(i), c.x, c.y, c.z, sigma[i]});
    }
    add(report, "poisson_surface_max_error", worst, o.tol_poisson_surface);
    report.tables.push_back(std::move(table));
  }

  if (o.user_field) {
    const GreenResidual r = greens_first_identity_residual(*o.user_field, *o.user_field);
    const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
    add(report, "user_field_green_relative_residual", std::abs(r.residual) / scale, o.tol_green);
  }
  return report;
}

}  // namespace dirichlet
