#include "dirichlet/potential_fields.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "dirichlet/error.hpp"
#include "dirichlet/parallel.hpp"
#include "doctest.h"

using namespace dirichlet;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ScalarField uniform_ball(double h, double radius, double rho = 1.0) {
  const Domain ball = Domain::ball({0, 0, 0}, radius);
  const GridPtr g = build_grid(ball, h, 0.0);
  return ScalarField::sample(g, [&](const Vec3& p) { return ball.contains(p) ? rho : 0.0; });
}

}  // namespace

TEST_CASE("cube self integral pinned against high-precision quadrature") {
  // mpmath triple integral of 1/r over [-1/2, 1/2]^3 at 30 digits.
  CHECK(kCubeSelfIntegral == doctest::Approx(2.3800773639795535).epsilon(1e-15));
}

TEST_CASE("disc kernel integral against independent references") {
  // Centre of the disc: closed form 2 pi (sqrt(a^2 + z^2) - |z|).
  CHECK(disc_kernel_integral(1, 0, 0) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(disc_kernel_integral(1, 0, 0.5) == doctest::Approx(3.8832220774509332).epsilon(1e-13));
  CHECK(disc_kernel_integral(1, 0, -0.5) == doctest::Approx(3.8832220774509332).epsilon(1e-13));
  // mpmath 2-D quadrature over the disc.
  CHECK(disc_kernel_integral(1, 0.5, 0.1) == doctest::Approx(5.2804453265377292).epsilon(1e-12));
  CHECK(disc_kernel_integral(1, 2, 0.3) == doctest::Approx(1.6015179912218023).epsilon(1e-12));
  CHECK(disc_kernel_integral(0.1, 0.05, 0.02) == doctest::Approx(0.47664066993114236).epsilon(1e-12));
  CHECK(disc_kernel_integral(1, 0.9, 0.05) == doctest::Approx(4.4024349109566712).epsilon(1e-12));
  // In-plane values from complete elliptic integrals: 4aE(s/a) inside,
  // 4s[E(a/s) - (1 - a^2/s^2)K(a/s)] outside.
  CHECK(disc_kernel_integral(1, 0.5, 0) == doctest::Approx(5.8698488373577086).epsilon(1e-12));
  CHECK(disc_kernel_integral(1, 0.99, 0) == doctest::Approx(4.1139032361152161).epsilon(1e-12));
  CHECK(disc_kernel_integral(1, 1.5, 0) == doctest::Approx(2.2363986424446027).epsilon(1e-12));
  CHECK(disc_kernel_integral(1, 3, 0) == doctest::Approx(1.0623856305491033).epsilon(1e-12));
  // Far away the disc looks like a point charge of its area.
  CHECK(disc_kernel_integral(0.01, 10, 0) == doctest::Approx(kPi * 1e-4 / 10).epsilon(1e-6));
}

TEST_CASE("zero densities give zero potential and energy") {
  const ScalarField rho(build_grid(Domain::ball({0, 0, 0}, 1.0), 0.2, 0.0));
  const std::vector<Vec3> targets{{0, 0, 0}, {3, 0, 0}};
  for (double u : volume_potential(rho, targets)) CHECK(u == 0.0);
  CHECK(volume_self_energy(rho) == 0.0);
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 8);
  const std::vector<double> zero(mesh.size(), 0.0);
  for (double u : surface_potential(mesh, zero, targets)) CHECK(u == 0.0);
  CHECK(surface_self_energy(mesh, zero) == 0.0);
  const MutualEnergy m = mutual_energy(rho, mesh, std::vector<double>(mesh.size(), 1.0));
  CHECK(m.via_volume == 0.0);
  CHECK(m.via_surface == 0.0);
  const EnergyReport r = total_energy(&rho, &mesh, zero);
  CHECK(r.total == 0.0);
}

TEST_CASE("uniform ball potential and self energy") {
  const ScalarField rho = uniform_ball(0.1, 1.0);
  const std::vector<Vec3> targets{{0, 0, 0}, {3, 0, 0}};
  const auto u = volume_potential(rho, targets);
  CHECK(rel(u[0], 2 * kPi) < 0.02);
  CHECK(rel(u[1], 4 * kPi / 9) < 0.02);
  CHECK(rel(volume_self_energy(rho), 16 * kPi * kPi / 15) < 0.03);
}

TEST_CASE("volume potential on a grid equals the point-list form") {
  const ScalarField rho = uniform_ball(0.25, 1.0);
  const GridPtr targets = build_grid(Domain::box({-1, -1, -1}, {1, 1, 1}), 0.5, 0.0);
  const ScalarField on_grid = volume_potential(rho, targets);
  std::vector<Vec3> pts;
  for (std::size_t n = 0; n < targets->size(); ++n) pts.push_back(targets->position(n));
  CHECK(volume_potential(rho, pts) == on_grid.values);
}

TEST_CASE("self energies are quadratic in the density") {
  const ScalarField rho = uniform_ball(0.2, 1.0);
  ScalarField twice = rho;
  for (double& v : twice.values) v *= 2;
  CHECK(rel(volume_self_energy(twice), 4 * volume_self_energy(rho)) < 1e-13);

  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 10);
  const std::vector<double> one(mesh.size(), 1.0);
  const std::vector<double> scaled(mesh.size(), -1.7);
  CHECK(rel(surface_self_energy(mesh, scaled), 1.7 * 1.7 * surface_self_energy(mesh, one)) < 1e-13);
}

TEST_CASE("shell theorem for the uniformly charged unit sphere") {
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 63);
  const std::vector<double> sigma(mesh.size(), 1.0);
  const std::vector<Vec3> targets{{0, 0, 0}, {0.5, 0, 0}, {0, 0, 1.5}, {0, 2, 0}, {4, 0, 0}};
  const auto u = surface_potential(mesh, sigma, targets);
  CHECK(rel(u[0], 4 * kPi) < 0.01);
  CHECK(rel(u[1], 4 * kPi) < 0.01);
  CHECK(rel(u[2], 4 * kPi / 1.5) < 0.01);
  CHECK(rel(u[3], 2 * kPi) < 0.01);
  CHECK(rel(u[4], kPi) < 0.01);
  CHECK(rel(surface_self_energy(mesh, sigma), 8 * kPi * kPi) < 0.03);
}

TEST_CASE("surface potential is finite on the surface itself") {
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 20);
  const std::vector<double> sigma(mesh.size(), 1.0);
  std::vector<Vec3> on_surface;
  for (const Panel& p : mesh.panels) on_surface.push_back(p.centroid);
  for (double u : surface_potential(mesh, sigma, on_surface)) {
    CHECK(std::isfinite(u));
    CHECK(rel(u, 4 * kPi) < 0.05);
  }
}

TEST_CASE("surface potential is discretely harmonic away from the sheet") {
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 12);
  const std::vector<double> sigma(mesh.size(), 1.0);
  auto lap = [&](double h) {
    const Vec3 c{2.5, 0.3, -0.2};
    std::vector<Vec3> pts{c};
    for (int a = 0; a < 3; ++a)
      for (int s : {-1, 1}) {
        Vec3 p = c;
        p[a] += s * h;
        pts.push_back(p);
      }
    const auto u = surface_potential(mesh, sigma, pts);
    double sum = -6 * u[0];
    for (std::size_t i = 1; i < 7; ++i) sum += u[i];
    return std::abs(sum / (h * h));
  };
  const double ratio = lap(0.2) / lap(0.1);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("mutual energy for a ball inside a charged sphere") {
  const ScalarField rho = uniform_ball(0.1, 0.5);
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 24);
  const std::vector<double> sigma(mesh.size(), 1.0);
  const MutualEnergy m = mutual_energy(rho, mesh, sigma);
  CHECK(rel(m.via_volume, m.via_surface) < 0.02);
  // Shell theorem: potential 4 pi inside the sphere, times the node charge.
  double q_vol = 0.0;
  for (double v : rho.values) q_vol += v * std::pow(rho.grid->spacing(), 3);
  CHECK(rel(m.via_volume, 4 * kPi * q_vol) < 0.03);
}

TEST_CASE("total energy equals the four-integral expansion") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const GridPtr g = build_grid(Domain::box({-0.4, -0.4, -0.4}, {0.4, 0.4, 0.4}), 0.2, 0.0);
  ScalarField rho(g);
  for (double& v : rho.values) v = dist(rng);
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 6);
  std::vector<double> sigma(mesh.size());
  for (double& s : sigma) s = dist(rng);

  std::vector<Vec3> nodes;
  for (std::size_t n = 0; n < g->size(); ++n) nodes.push_back(g->position(n));
  std::vector<Vec3> centroids;
  for (const Panel& p : mesh.panels) centroids.push_back(p.centroid);
  const auto uv_n = volume_potential(rho, nodes);
  const auto us_n = surface_potential(mesh, sigma, nodes);
  const auto uv_c = volume_potential(rho, centroids);
  const auto us_c = surface_potential(mesh, sigma, centroids);
  const double h3 = std::pow(g->spacing(), 3);
  double direct = 0.0;
  for (std::size_t n = 0; n < nodes.size(); ++n) direct += 0.5 * rho[n] * h3 * (uv_n[n] + us_n[n]);
  for (std::size_t i = 0; i < centroids.size(); ++i)
    direct += 0.5 * sigma[i] * mesh.panels[i].area * (uv_c[i] + us_c[i]);

  const EnergyReport r = total_energy(&rho, &mesh, sigma);
  CHECK(rel(r.total, direct) < 1e-10);
  CHECK(r.total == doctest::Approx(r.volume_self + r.surface_self + r.mutual));

  const EnergyReport s = total_energy(nullptr, &mesh, sigma);
  CHECK(s.total == s.surface_self);
  CHECK(s.volume_self == 0.0);
  CHECK(s.mutual == 0.0);
}

TEST_CASE("non-finite densities are rejected") {
  ScalarField rho = uniform_ball(0.25, 1.0);
  rho[0] = NAN;
  CHECK_THROWS_AS(volume_self_energy(rho), Error);
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 4);
  std::vector<double> sigma(mesh.size(), 1.0);
  sigma[2] = INFINITY;
  CHECK_THROWS_AS(surface_self_energy(mesh, sigma), Error);
  CHECK_THROWS_AS(surface_self_energy(mesh, std::vector<double>(3, 1.0)), Error);
}

TEST_CASE("threaded and sequential evaluation are bit-identical") {
  const ScalarField rho = uniform_ball(0.1, 0.5);
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 16);
  const std::vector<double> sigma(mesh.size(), 1.0);
  set_sequential(true);
  const EnergyReport a = total_energy(&rho, &mesh, sigma);
  set_sequential(false);
  const EnergyReport b = total_energy(&rho, &mesh, sigma);
  CHECK(a.total == b.total);
  CHECK(a.mutual == b.mutual);
}
