#include "dirichlet/energy_identities.hpp"

#include <cmath>
#include <numbers>

#include "dirichlet/error.hpp"
#include "dirichlet/potential_fields.hpp"
#include "json.hpp"

namespace dirichlet {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kEightPi = 8.0 * std::numbers::pi;

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  require(a.grid && b.grid, "field has no grid");
  if (a.grid != b.grid && !a.grid->same_layout(*b.grid))
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

bool is_interior(const Grid3& g, std::size_t n) { return g.kind(n) == NodeKind::Interior; }

// Integral of 1/R(w) over unit directions, R(w) the distance from the box
// centre to its surface along w.
double inverse_exit_distance_integral(const Vec3& half_extent) {
  const SurfaceMesh sphere = panelize(Domain::ball({0, 0, 0}, 1.0), 160);
  double sum = 0.0;
  for (const auto& p : sphere.panels) {
    double inv = 0.0;
    for (int a = 0; a < 3; ++a) inv = std::max(inv, std::abs(p.normal[a]) / half_extent[a]);
    sum += p.area * inv;
  }
  return sum;
}

}  // namespace

std::string to_json(const EnergyReport& r) {
  nlohmann::ordered_json j;
  j["volume_self"] = r.volume_self;
  j["surface_self"] = r.surface_self;
  j["mutual"] = r.mutual;
  j["total"] = r.total;
  j["dirichlet_interior"] = r.dirichlet_interior;
  j["dirichlet_exterior"] = r.dirichlet_exterior;
  j["complete_energy"] = r.complete_energy;
  return j.dump(2);
}

double laplacian_7pt(const ScalarField& u, std::size_t node) {
  const Grid3& g = *u.grid;
  double s = -6.0 * u.values[node];
  for (int a = 0; a < 3; ++a)
    for (int d : {-1, 1}) s += u.values[g.neighbor(node, a, d)];
  const double h = g.spacing();
  return s / (h * h);
}

VolumeDensity recover_volume_density(const ScalarField& u) {
  require(u.grid != nullptr, "field has no grid");
  const Grid3& g = *u.grid;
  VolumeDensity out{ScalarField(u.grid), std::vector<bool>(g.size(), false)};
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!g.has_full_stencil(n)) continue;
    const bool inside = is_interior(g, n);
    bool one_side = true;
    for (int a = 0; a < 3 && one_side; ++a)
      for (int d : {-1, 1})
        if (is_interior(g, g.neighbor(n, a, d)) != inside) one_side = false;
    if (!one_side) continue;
    out.rho.values[n] = -laplacian_7pt(u, n) / kFourPi;
    out.present[n] = true;
  }
  return out;
}

NormalSamples sample_along_normals(const SurfaceMesh& mesh, const PotentialFn& u, double delta) {
  const ProbePoints near = normal_probe_points(mesh, delta);
  const ProbePoints far = normal_probe_points(mesh, 2.0 * delta);
  NormalSamples s;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    s.surface.push_back(u(mesh.panels[i].centroid));
    s.outside_near.push_back(u(near.outside[i]));
    s.outside_far.push_back(u(far.outside[i]));
    s.inside_near.push_back(u(near.inside[i]));
    s.inside_far.push_back(u(far.inside[i]));
  }
  return s;
}

std::vector<double> recover_surface_density(const NormalSamples& s, const SurfaceMesh& mesh, double delta) {
  require(std::isfinite(delta) && delta > 0.0, "probe offset must be positive");
  const std::size_t n = mesh.size();
  require(s.surface.size() == n && s.outside_near.size() == n && s.outside_far.size() == n &&
              s.inside_near.size() == n && s.inside_far.size() == n,
          "need one sample of each kind per panel");
  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d_out = (4.0 * s.outside_near[i] - s.outside_far[i] - 3.0 * s.surface[i]) / (2.0 * delta);
    const double d_in = (3.0 * s.surface[i] - 4.0 * s.inside_near[i] + s.inside_far[i]) / (2.0 * delta);
    sigma[i] = -(d_out - d_in) / kFourPi;
  }
  return sigma;
}

GreenResidual greens_first_identity_residual(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  const Grid3& g = *a.grid;
  const double h = g.spacing();
  const double h3 = h * h * h;
  GreenResidual r;
  double laplace_term = 0.0;
  double gradient_term = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!is_interior(g, n)) continue;
    laplace_term += a[n] * laplacian_7pt(b, n) * h3;
    for (int ax = 0; ax < 3; ++ax) {
      for (int d : {-1, 1}) {
        const std::size_t m = g.neighbor(n, ax, d);
        const double db = b[m] - b[n];
        if (is_interior(g, m)) {
          // (da/h)(db/h) h^3, each interior face visited once.
          if (d > 0) gradient_term += (a[m] - a[n]) * db * h;
        } else {
          // face-centred A times outward one-sided dB/dn times face area h^2
          r.lhs += 0.5 * (a[n] + a[m]) * db * h;
        }
      }
    }
  }
  r.rhs = laplace_term + gradient_term;
  r.residual = r.lhs - r.rhs;
  return r;
}

EnergyReport complete_energy(const ScalarField& u, const CompleteEnergyOptions& options) {
  require(u.grid != nullptr, "field has no grid");
  require(u.all_finite(), "potential must be finite");
  const Grid3& g = *u.grid;
  const auto& dims = g.dims();
  for (std::size_t a = 0; a < 3; ++a) require(dims[a] >= 3, "complete_energy needs at least 3 nodes per axis");
  const double h = g.spacing();
  const Domain& omega = g.domain();

  // Trapezoid in the directions transverse to each edge: the edge gets 1/4 of
  // h * (du)^2 from each of its (up to four) adjacent cells, assigned to the
  // interior or exterior integral by the cell centre.
  double d_int = 0.0;
  double d_ext = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto c = g.ijk(n);
    for (int ax = 0; ax < 3; ++ax) {
      if (c[static_cast<std::size_t>(ax)] + 1 >= dims[static_cast<std::size_t>(ax)]) continue;
      const std::size_t m = g.neighbor(n, ax, +1);
      const double du = u[m] - u[n];
      const double edge = du * du * h;
      if (edge == 0.0) continue;
      const int b1 = (ax + 1) % 3;
      const int b2 = (ax + 2) % 3;
      const Vec3 mid = (g.position(n) + g.position(m)) * 0.5;
      for (int s1 : {-1, 1}) {
        const std::size_t c1 = c[static_cast<std::size_t>(b1)];
        if ((s1 < 0 && c1 == 0) || (s1 > 0 && c1 + 1 >= dims[static_cast<std::size_t>(b1)])) continue;
        for (int s2 : {-1, 1}) {
          const std::size_t c2 = c[static_cast<std::size_t>(b2)];
          if ((s2 < 0 && c2 == 0) || (s2 > 0 && c2 + 1 >= dims[static_cast<std::size_t>(b2)])) continue;
          Vec3 centre = mid;
          centre[b1] += 0.5 * h * s1;
          centre[b2] += 0.5 * h * s2;
          (omega.contains(centre) ? d_int : d_ext) += 0.25 * edge;
        }
      }
    }
  }

  if (options.monopole_tail) {
    // Gauss flux through the box shrunk by h/2.
    double flux = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
      const auto c = g.ijk(n);
      for (int ax = 0; ax < 3; ++ax) {
        const auto axu = static_cast<std::size_t>(ax);
        const std::size_t t1 = c[static_cast<std::size_t>((ax + 1) % 3)];
        const std::size_t t2 = c[static_cast<std::size_t>((ax + 2) % 3)];
        const std::size_t n1 = dims[static_cast<std::size_t>((ax + 1) % 3)];
        const std::size_t n2 = dims[static_cast<std::size_t>((ax + 2) % 3)];
        if (t1 == 0 || t1 + 1 >= n1 || t2 == 0 || t2 + 1 >= n2) continue;
        if (c[axu] == 0) flux += (u[n] - u[g.neighbor(n, ax, +1)]) * h;
        if (c[axu] + 1 == dims[axu]) flux += (u[n] - u[g.neighbor(n, ax, -1)]) * h;
      }
    }
    const double q = -flux / kFourPi;
    const Vec3 half{0.5 * h * static_cast<double>(dims[0] - 1), 0.5 * h * static_cast<double>(dims[1] - 1),
                    0.5 * h * static_cast<double>(dims[2] - 1)};
    d_ext += q * q * inverse_exit_distance_integral(half);
  }

  EnergyReport r;
  r.dirichlet_interior = d_int;
  r.dirichlet_exterior = d_ext;
  r.complete_energy = (d_int + d_ext) / kEightPi;
  return r;
}

EnergyReport energy_chain(const PotentialFn& u, GridPtr grid, const SurfaceMesh& mesh, double delta,
                          const CompleteEnergyOptions& options) {
  const ScalarField field = ScalarField::sample(grid, u);
  const VolumeDensity rho = recover_volume_density(field);
  const std::vector<double> sigma = recover_surface_density(sample_along_normals(mesh, u, delta), mesh, delta);
  EnergyReport r = total_energy(&rho.rho, &mesh, sigma);
  const EnergyReport d = complete_energy(field, options);
  r.dirichlet_interior = d.dirichlet_interior;
  r.dirichlet_exterior = d.dirichlet_exterior;
  r.complete_energy = d.complete_energy;
  return r;
}

}  // namespace dirichlet
