#include "dirichlet/potential_fields.hpp"

#include <cmath>
#include <numbers>

#include "dirichlet/error.hpp"
#include "dirichlet/parallel.hpp"

namespace dirichlet {

namespace {

constexpr int kDiscAngles = 256;

struct VolumeSource {
  Vec3 position;
  double rho;
  double charge;  // rho * h^3
};

std::vector<VolumeSource> volume_sources(const ScalarField& rho) {
  require(rho.grid != nullptr, "density field has no grid");
  require(rho.all_finite(), "density field must be finite");
  const double h3 = std::pow(rho.grid->spacing(), 3);
  std::vector<VolumeSource> src;
  for (std::size_t n = 0; n < rho.values.size(); ++n)
    if (rho.values[n] != 0.0) src.push_back({rho.grid->position(n), rho.values[n], rho.values[n] * h3});
  return src;
}

double volume_potential_at(const std::vector<VolumeSource>& src, double h, const Vec3& t) {
  const double half = 0.5 * h;
  const double self = h * h * kCubeSelfIntegral;
  double u = 0.0;
  for (const auto& s : src) {
    const Vec3 d = t - s.position;
    if (std::abs(d.x) < half && std::abs(d.y) < half && std::abs(d.z) < half)
      u += s.rho * self;
    else
      u += s.charge / norm(d);
  }
  return u;
}

struct PanelSource {
  Vec3 centroid;
  Vec3 normal;
  double area;
  double disc_radius;
  double sigma;
};

std::vector<PanelSource> panel_sources(const SurfaceMesh& mesh, std::span<const double> sigma) {
  require(sigma.size() == mesh.size(), "sigma must have one value per panel");
  std::vector<PanelSource> src;
  src.reserve(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    require(std::isfinite(sigma[i]), "surface density must be finite");
    if (sigma[i] == 0.0) continue;
    const Panel& p = mesh.panels[i];
    src.push_back({p.centroid, p.normal, p.area, std::sqrt(p.area / std::numbers::pi), sigma[i]});
  }
  return src;
}

double surface_potential_at(const std::vector<PanelSource>& src, const Vec3& t) {
  double u = 0.0;
  for (const auto& p : src) {
    const Vec3 d = t - p.centroid;
    const double d2 = dot(d, d);
    if (d2 < p.area) {
      const double z = dot(d, p.normal);
      const double s = std::sqrt(std::max(0.0, d2 - z * z));
      u += p.sigma * disc_kernel_integral(p.disc_radius, s, z);
    } else {
      u += p.sigma * p.area / std::sqrt(d2);
    }
  }
  return u;
}

double ordered_sum(const std::vector<double>& terms) {
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

std::vector<Vec3> node_positions(const Grid3& g) {
  std::vector<Vec3> pts(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) pts[n] = g.position(n);
  return pts;
}

}  // namespace

double disc_kernel_integral(double a, double s, double z) {
  require(a > 0.0 && s >= 0.0, "disc radius must be positive and offset nonnegative");
  const double az = std::abs(z);
  if (s <= 1e-14 * a) return 2.0 * std::numbers::pi * (std::hypot(a, z) - az);

  double sum = 0.0;
  if (s < a) {
    // Projection inside the disc: every ray leaves through the rim once.
    const double dphi = 2.0 * std::numbers::pi / kDiscAngles;
    for (int k = 0; k < kDiscAngles; ++k) {
      const double phi = (k + 0.5) * dphi;
      const double sp = s * std::sin(phi);
      const double len = s * std::cos(phi) + std::sqrt(a * a - sp * sp);
      sum += std::hypot(len, z) - az;
    }
    return sum * dphi;
  }
  // Projection outside: rays within +-asin(a/s) cross a chord [t-, t+].
  // phi = phi_max sin(psi) removes the square-root behaviour at tangency.
  const double phi_max = std::asin(std::min(1.0, a / s));
  const double dpsi = std::numbers::pi / kDiscAngles;
  for (int k = 0; k < kDiscAngles; ++k) {
    const double psi = -0.5 * std::numbers::pi + (k + 0.5) * dpsi;
    const double phi = phi_max * std::sin(psi);
    const double sp = s * std::sin(phi);
    const double root = std::sqrt(std::max(0.0, a * a - sp * sp));
    const double mid = s * std::cos(phi);
    sum += (std::hypot(mid + root, z) - std::hypot(mid - root, z)) * phi_max * std::cos(psi);
  }
  return sum * dpsi;
}

std::vector<double> volume_potential(const ScalarField& rho, std::span<const Vec3> targets) {
  const auto src = volume_sources(rho);
  const double h = rho.grid->spacing();
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) { out[i] = volume_potential_at(src, h, targets[i]); });
  return out;
}

ScalarField volume_potential(const ScalarField& rho, GridPtr targets) {
  const auto pts = node_positions(*targets);
  return ScalarField(targets, volume_potential(rho, pts));
}

std::vector<double> surface_potential(const SurfaceMesh& mesh, std::span<const double> sigma,
                                      std::span<const Vec3> targets) {
  const auto src = panel_sources(mesh, sigma);
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) { out[i] = surface_potential_at(src, targets[i]); });
  return out;
}

ScalarField surface_potential(const SurfaceMesh& mesh, std::span<const double> sigma, GridPtr targets) {
  const auto pts = node_positions(*targets);
  return ScalarField(targets, surface_potential(mesh, sigma, pts));
}

double volume_self_energy(const ScalarField& rho) {
  const auto src = volume_sources(rho);
  const double h = rho.grid->spacing();
  std::vector<double> terms(src.size());
  parallel_for(src.size(), [&](std::size_t i) { terms[i] = src[i].charge * volume_potential_at(src, h, src[i].position); });
  return 0.5 * ordered_sum(terms);
}

double surface_self_energy(const SurfaceMesh& mesh, std::span<const double> sigma) {
  const auto src = panel_sources(mesh, sigma);
  std::vector<double> terms(src.size());
  parallel_for(src.size(), [&](std::size_t i) { terms[i] = src[i].sigma * src[i].area * surface_potential_at(src, src[i].centroid); });
  return 0.5 * ordered_sum(terms);
}

MutualEnergy mutual_energy(const ScalarField& rho, const SurfaceMesh& mesh, std::span<const double> sigma) {
  const auto vsrc = volume_sources(rho);
  const auto psrc = panel_sources(mesh, sigma);
  const double h = rho.grid->spacing();
  std::vector<double> vterms(vsrc.size());
  std::vector<double> pterms(psrc.size());
  parallel_for(vsrc.size(), [&](std::size_t i) { vterms[i] = vsrc[i].charge * surface_potential_at(psrc, vsrc[i].position); });
  parallel_for(psrc.size(), [&](std::size_t i) { pterms[i] = psrc[i].sigma * psrc[i].area * volume_potential_at(vsrc, h, psrc[i].centroid); });
  return {ordered_sum(vterms), ordered_sum(pterms)};
}

EnergyReport total_energy(const ScalarField* rho, const SurfaceMesh* mesh, std::span<const double> sigma) {
  EnergyReport r;
  const bool has_volume = rho != nullptr && rho->grid != nullptr;
  const bool has_surface = mesh != nullptr && !sigma.empty();
  if (has_volume) r.volume_self = volume_self_energy(*rho);
  if (has_surface) r.surface_self = surface_self_energy(*mesh, sigma);
  if (has_volume && has_surface) {
    const MutualEnergy m = mutual_energy(*rho, *mesh, sigma);
    r.mutual = 0.5 * (m.via_volume + m.via_surface);
  }
  r.total = r.volume_self + r.surface_self + r.mutual;
  return r;
}

}  // namespace dirichlet
