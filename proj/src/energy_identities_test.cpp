#include "dirichlet/energy_identities.hpp"

#include <cmath>
#include <numbers>

#include "dirichlet/error.hpp"
#include "dirichlet/potential_fields.hpp"
#include "doctest.h"

using namespace dirichlet;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr unit_cube(double h) { return build_grid(Domain::box({0, 0, 0}, {1, 1, 1}), h, 0.0); }

double shell(const Vec3& p) {
  const double r = norm(p);
  return r <= 1.0 ? 4 * kPi : 4 * kPi / r;
}

double bump(const Vec3& p) {
  const double s = dot(p, p) / 0.16;
  return s < 1.0 ? std::pow(1.0 - s, 4) : 0.0;
}

// (1/8 pi) int |grad bump|^2 = 32 a int_0^1 t^4 (1 - t^2)^6 dt with a = 0.4,
// evaluated exactly: 65536 / 1276275.
constexpr double kBumpEnergy = 65536.0 / 1276275.0;

}  // namespace

TEST_CASE("volume density of linear and quadratic potentials is exact") {
  const GridPtr g = build_grid(Domain::box({-1, -1, -1}, {1, 1, 1}), 0.1, 0.0);
  const VolumeDensity lin = recover_volume_density(ScalarField::sample(g, [](const Vec3& p) { return 3 * p.x - p.z + 2; }));
  const VolumeDensity par =
      recover_volume_density(ScalarField::sample(g, [](const Vec3& p) { return -2 * kPi / 3 * dot(p, p); }));
  // Hessian trace 2 (1 - 3 + 0.5) = -3 gives rho = 3 / (4 pi).
  const VolumeDensity quad = recover_volume_density(
      ScalarField::sample(g, [](const Vec3& p) { return p.x * p.x - 3 * p.y * p.y + 0.5 * p.z * p.z + p.x * p.y - p.z; }));
  std::size_t present = 0;
  for (std::size_t n = 0; n < g->size(); ++n) {
    if (!lin.present[n]) continue;
    ++present;
    CHECK(std::abs(lin.rho[n]) < 1e-12);
    CHECK(std::abs(par.rho[n] - 1.0) < 1e-10);
    CHECK(std::abs(quad.rho[n] - 3 / (4 * kPi)) < 1e-10);
  }
  // Interior nodes next to a Boundary node straddle S; 17^3 remain.
  CHECK(present == 17 * 17 * 17);
}

TEST_CASE("volume density skips stencils that straddle the surface") {
  const GridPtr g = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.1, 0.3);
  const VolumeDensity d = recover_volume_density(ScalarField::sample(g, shell));
  for (std::size_t n = 0; n < g->size(); ++n) {
    if (!d.present[n]) continue;
    const bool inside = g->kind(n) == NodeKind::Interior;
    for (int a = 0; a < 3; ++a)
      for (int s : {-1, 1}) CHECK((g->kind(g->neighbor(n, a, s)) == NodeKind::Interior) == inside);
    // The shell potential is harmonic on either side of S.
    CHECK(std::abs(d.rho[n]) < 0.05);
  }
}

TEST_CASE("volume density of 1/r converges to zero at second order") {
  auto rho_at = [](double h) {
    const GridPtr g = build_grid(Domain::box({0.2, 0.2, 0.2}, {1, 1, 1}), h, 0.0);
    const VolumeDensity d = recover_volume_density(ScalarField::sample(g, [](const Vec3& p) { return 1 / norm(p); }));
    const std::size_t n = g->index(static_cast<std::size_t>(std::lround(0.2 / h)), static_cast<std::size_t>(std::lround(0.2 / h)),
                                   static_cast<std::size_t>(std::lround(0.2 / h)));
    REQUIRE(d.present[n]);
    return std::abs(d.rho[n]);
  };
  const double ratio = rho_at(0.1) / rho_at(0.05);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("surface density recovery") {
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 40);
  const double delta = 0.04;
  for (double s : recover_surface_density(sample_along_normals(mesh, [](const Vec3&) { return 2.5; }, delta), mesh, delta))
    CHECK(std::abs(s) < 1e-12);
  for (double s : recover_surface_density(sample_along_normals(mesh, [](const Vec3& p) { return p.x; }, delta), mesh, delta))
    CHECK(std::abs(s) < 1e-12);
  const auto sigma = recover_surface_density(sample_along_normals(mesh, shell, delta), mesh, delta);
  for (double s : sigma) CHECK(std::abs(s - 1.0) < 0.02);

  // Linear in U.
  const auto doubled = recover_surface_density(
      sample_along_normals(mesh, [](const Vec3& p) { return 2 * shell(p) + 1; }, delta), mesh, delta);
  for (std::size_t i = 0; i < sigma.size(); ++i) CHECK(doubled[i] == doctest::Approx(2 * sigma[i]).epsilon(1e-10));
}

TEST_CASE("surface density rejects bad offsets and sample counts") {
  const SurfaceMesh mesh = panelize(Domain::ball({0, 0, 0}, 1.0), 4);
  const NormalSamples s = sample_along_normals(mesh, shell, 0.1);
  CHECK_THROWS_AS(recover_surface_density(s, mesh, 0.0), Error);
  NormalSamples short_samples = s;
  short_samples.inside_far.pop_back();
  CHECK_THROWS_AS(recover_surface_density(short_samples, mesh, 0.1), Error);
}

TEST_CASE("Green's first identity hand cases") {
  const GridPtr g = unit_cube(0.05);
  auto field = [&](auto fn) { return ScalarField::sample(g, fn); };

  const GreenResidual xx = greens_first_identity_residual(field([](const Vec3& p) { return p.x; }),
                                                          field([](const Vec3& p) { return p.x; }));
  // Control volumes tile [0.025, 0.975]^3, so the flux of x is 0.95^3. The
  // face-averaged A leaves h^3 / 2 on each of the 2 * 19^2 x-faces.
  CHECK(xx.lhs == doctest::Approx(0.95 * 0.95 * 0.95).epsilon(1e-12));
  CHECK(xx.residual == doctest::Approx(19 * 19 * std::pow(0.05, 3)).epsilon(1e-10));

  const GreenResidual div = greens_first_identity_residual(
      field([](const Vec3&) { return 1.0; }), field([](const Vec3& p) { return std::sin(3 * p.x) * p.y + p.z * p.z * p.z; }));
  CHECK(std::abs(div.residual) < 1e-12);

  const GreenResidual q = greens_first_identity_residual(field([](const Vec3& p) { return p.x * p.x; }),
                                                         field([](const Vec3& p) { return p.y * p.y; }));
  CHECK(std::abs(q.residual) < 1e-12);
  CHECK(std::abs(q.lhs - 2.0 / 3.0) < 0.15);
}

TEST_CASE("Green residual and the x^2, y^2 sides converge under refinement") {
  auto run = [](double h, auto a, auto b) {
    const GridPtr g = unit_cube(h);
    return greens_first_identity_residual(ScalarField::sample(g, a), ScalarField::sample(g, b));
  };
  auto a = [](const Vec3& p) { return std::sin(p.x) + p.y * p.z; };
  auto b = [](const Vec3& p) { return std::exp(p.x) * std::cos(p.y) + p.z * p.z; };
  const double coarse = std::abs(run(0.05, a, b).residual);
  const double fine = std::abs(run(0.025, a, b).residual);
  CHECK(fine <= coarse / 1.5);

  auto x2 = [](const Vec3& p) { return p.x * p.x; };
  auto y2 = [](const Vec3& p) { return p.y * p.y; };
  const double e1 = std::abs(run(0.05, x2, y2).lhs - 2.0 / 3.0);
  const double e2 = std::abs(run(0.025, x2, y2).lhs - 2.0 / 3.0);
  CHECK(e2 < e1 / 1.5);
}

TEST_CASE("Green's identity requires a shared grid") {
  const ScalarField a(unit_cube(0.25));
  const ScalarField b(unit_cube(0.2));
  try {
    greens_first_identity_residual(a, b);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("complete energy of zero and of a compact bump") {
  const GridPtr g = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.05, 0.1);
  const EnergyReport zero = complete_energy(ScalarField(g));
  CHECK(zero.complete_energy == 0.0);
  CHECK(zero.dirichlet_interior == 0.0);
  CHECK(zero.dirichlet_exterior == 0.0);

  const ScalarField u = ScalarField::sample(g, bump);
  const EnergyReport r = complete_energy(u);
  CHECK(std::abs(r.complete_energy - kBumpEnergy) / kBumpEnergy < 0.02);
  CHECK(r.complete_energy == doctest::Approx((r.dirichlet_interior + r.dirichlet_exterior) / (8 * kPi)));
  // Support inside Omega: nothing outside.
  CHECK(r.dirichlet_exterior == 0.0);

  // Summation by parts: equals -(1/8 pi) sum U Lap_h U h^3.
  double by_parts = 0.0;
  for (std::size_t n = 0; n < g->size(); ++n)
    if (u[n] != 0.0) by_parts -= u[n] * laplacian_7pt(u, n) * std::pow(g->spacing(), 3);
  CHECK(r.complete_energy == doctest::Approx(by_parts / (8 * kPi)).epsilon(1e-10));
}

TEST_CASE("energy chain for the bump closes under refinement") {
  const Domain omega = Domain::ball({0, 0, 0}, 1.0);
  const SurfaceMesh mesh = panelize(omega, 16);
  double previous = 1.0;
  for (double h : {0.1, 0.05}) {
    const EnergyReport r = energy_chain(bump, build_grid(omega, h, 2 * h), mesh, 2 * h);
    const double gap = std::abs(r.total - r.complete_energy) / r.complete_energy;
    CHECK(gap < previous);
    previous = gap;
    CHECK(std::abs(r.surface_self) < 1e-20);
  }
  CHECK(previous < 0.05);
}

TEST_CASE("energy report JSON") {
  EnergyReport r;
  r.total = 1.5;
  const std::string j = to_json(r);
  for (const char* key : {"volume_self", "surface_self", "mutual", "total", "dirichlet_interior", "dirichlet_exterior",
                          "complete_energy"})
    CHECK(j.find(key) != std::string::npos);
}
