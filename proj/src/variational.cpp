#include "dirichlet/variational.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "dirichlet/error.hpp"
#include "json.hpp"

namespace dirichlet {

namespace {

bool interior(const Grid3& g, std::size_t n) { return g.kind(n) == NodeKind::Interior; }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  require(a.grid && b.grid, "field has no grid");
  if (a.grid != b.grid && !a.grid->same_layout(*b.grid))
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

ScalarField axpy(const ScalarField& u, double x, const ScalarField& h) {
  ScalarField out(u.grid);
  for (std::size_t n = 0; n < u.values.size(); ++n) out.values[n] = u.values[n] + x * h.values[n];
  return out;
}

}  // namespace

BoundaryData BoundaryData::from_function(GridPtr grid, const std::function<double(const Vec3&)>& f) {
  require(grid != nullptr, "boundary data needs a grid");
  std::vector<double> v(grid->size(), 0.0);
  for (std::size_t n = 0; n < grid->size(); ++n) {
    if (interior(*grid, n)) continue;
    v[n] = f(grid->position(n));
    if (grid->kind(n) == NodeKind::Boundary && !std::isfinite(v[n])) {
      std::ostringstream msg;
      msg << "boundary value at node " << n << " is not finite";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    if (!std::isfinite(v[n])) v[n] = 0.0;
  }
  return BoundaryData(std::move(grid), std::move(v));
}

BoundaryData BoundaryData::from_node_values(GridPtr grid, const std::vector<double>& values) {
  require(grid != nullptr, "boundary data needs a grid");
  require(values.size() == grid->size(), "boundary values must be given per grid node");
  const Grid3& g = *grid;
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (g.kind(n) != NodeKind::Boundary) continue;
    if (!std::isfinite(values[n])) {
      std::ostringstream msg;
      msg << "missing or non-finite boundary value at node " << n;
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    v[n] = values[n];
  }
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (g.kind(n) != NodeKind::Exterior) continue;
    if (std::isfinite(values[n])) {
      v[n] = values[n];
      continue;
    }
    double sum = 0.0;
    int count = 0;
    for (int a = 0; a < 3; ++a)
      for (int d : {-1, 1})
        if (g.has_neighbor(n, a, d) && g.kind(g.neighbor(n, a, d)) == NodeKind::Boundary) {
          sum += v[g.neighbor(n, a, d)];
          ++count;
        }
    v[n] = count > 0 ? sum / count : 0.0;
  }
  return BoundaryData(std::move(grid), std::move(v));
}

double BoundaryData::min_boundary() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < values_.size(); ++n)
    if (grid_->kind(n) == NodeKind::Boundary) m = std::min(m, values_[n]);
  return m;
}

double BoundaryData::max_boundary() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < values_.size(); ++n)
    if (grid_->kind(n) == NodeKind::Boundary) m = std::max(m, values_[n]);
  return m;
}

double edge_weight(const Grid3& g, std::size_t node, int axis) {
  const std::size_t other = g.neighbor(node, axis, +1);
  if (interior(g, node) || interior(g, other)) return 1.0;
  const auto c = g.ijk(node);
  const auto& dims = g.dims();
  const double h = g.spacing();
  const int b1 = (axis + 1) % 3;
  const int b2 = (axis + 2) % 3;
  const Vec3 mid = (g.position(node) + g.position(other)) * 0.5;
  int inside = 0;
  for (int s1 : {-1, 1}) {
    const std::size_t c1 = c[static_cast<std::size_t>(b1)];
    if ((s1 < 0 && c1 == 0) || (s1 > 0 && c1 + 1 >= dims[static_cast<std::size_t>(b1)])) continue;
    for (int s2 : {-1, 1}) {
      const std::size_t c2 = c[static_cast<std::size_t>(b2)];
      if ((s2 < 0 && c2 == 0) || (s2 > 0 && c2 + 1 >= dims[static_cast<std::size_t>(b2)])) continue;
      Vec3 centre = mid;
      centre[b1] += 0.5 * h * s1;
      centre[b2] += 0.5 * h * s2;
      if (g.domain().contains(centre)) ++inside;
    }
  }
  return 0.25 * inside;
}

double dirichlet_form(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u, v);
  const Grid3& g = *u.grid;
  const double h = g.spacing();
  double sum = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    for (int a = 0; a < 3; ++a) {
      if (!g.has_neighbor(n, a, +1)) continue;
      const std::size_t m = g.neighbor(n, a, +1);
      const double du = u[m] - u[n];
      const double dv = v[m] - v[n];
      if (du == 0.0 || dv == 0.0) continue;
      sum += edge_weight(g, n, a) * du * dv;
    }
  }
  return sum * h;
}

double dirichlet_energy(const ScalarField& u) { return dirichlet_form(u, u); }

std::string to_json(const SolveResult& r) {
  nlohmann::ordered_json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["dirichlet_energy"] = r.dirichlet_energy;
  j["harmonicity_residual"] = r.harmonicity_residual;
  j["harmonicity_bound"] = r.harmonicity_bound;
  return j.dump(2);
}

std::size_t default_max_iterations(const Grid3& grid) {
  const double n = static_cast<double>(grid.counts().interior);
  return static_cast<std::size_t>(std::ceil(10.0 * std::pow(n, 2.0 / 3.0)));
}

SolveResult solve(const BoundaryData& f, const SolveOptions& options) {
  require(std::isfinite(options.tol) && options.tol > 0.0, "solver tolerance must be positive");
  const GridPtr& grid = f.grid();
  const Grid3& g = *grid;

  std::vector<std::size_t> unknowns;
  std::vector<std::size_t> slot(g.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t n = 0; n < g.size(); ++n)
    if (interior(g, n)) {
      slot[n] = unknowns.size();
      unknowns.push_back(n);
    }
  const std::size_t nu = unknowns.size();
  require(nu > 0, "grid has no Interior nodes");

  // A x = 6 x_i - sum of Interior neighbours; b = sum of Boundary neighbours.
  const auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < nu; ++i) {
      const std::size_t n = unknowns[i];
      double s = 6.0 * x[i];
      for (int a = 0; a < 3; ++a)
        for (int d : {-1, 1}) {
          const std::size_t m = g.neighbor(n, a, d);
          if (slot[m] != std::numeric_limits<std::size_t>::max()) s -= x[slot[m]];
        }
      y[i] = s;
    }
  };
  std::vector<double> b(nu, 0.0);
  double fmax = 0.0;
  for (std::size_t i = 0; i < nu; ++i) {
    const std::size_t n = unknowns[i];
    for (int a = 0; a < 3; ++a)
      for (int d : {-1, 1}) {
        const std::size_t m = g.neighbor(n, a, d);
        if (!interior(g, m)) {
          b[i] += f.values()[m];
          fmax = std::max(fmax, std::abs(f.values()[m]));
        }
      }
  }

  std::vector<double> x(nu, 0.0);
  if (options.initial) {
    require(options.initial->size() == g.size(), "initial iterate must be a full-grid vector");
    for (std::size_t i = 0; i < nu; ++i) x[i] = (*options.initial)[unknowns[i]];
  }
  const std::size_t max_iter = options.max_iter ? options.max_iter : default_max_iterations(g);
  const double threshold = options.tol * (1.0 + fmax);
  const double precond = options.jacobi ? 1.0 / 6.0 : 1.0;

  std::vector<double> r(nu), z(nu), p(nu), ap(nu);
  apply(x, ap);
  for (std::size_t i = 0; i < nu; ++i) r[i] = b[i] - ap[i];
  const auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
  };

  std::size_t iter = 0;
  bool converged = inf_norm(r) <= threshold;
  if (!converged) {
    for (std::size_t i = 0; i < nu; ++i) z[i] = precond * r[i];
    p = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < nu; ++i) rz += r[i] * z[i];
    while (iter < max_iter) {
      apply(p, ap);
      double pap = 0.0;
      for (std::size_t i = 0; i < nu; ++i) pap += p[i] * ap[i];
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      for (std::size_t i = 0; i < nu; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      ++iter;
      if (inf_norm(r) <= threshold) {
        converged = true;
        break;
      }
      double rz_next = 0.0;
      for (std::size_t i = 0; i < nu; ++i) {
        z[i] = precond * r[i];
        rz_next += r[i] * z[i];
      }
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < nu; ++i) p[i] = z[i] + beta * p[i];
    }
  }

  SolveResult result;
  result.field = ScalarField(grid, f.values());
  for (std::size_t i = 0; i < nu; ++i) result.field.values[unknowns[i]] = x[i];
  // Recompute the true residual rather than trusting the recurrence.
  apply(x, ap);
  double true_res = 0.0;
  for (std::size_t i = 0; i < nu; ++i) true_res = std::max(true_res, std::abs(b[i] - ap[i]));
  const double h2 = g.spacing() * g.spacing();
  result.harmonicity_residual = true_res / h2;
  result.harmonicity_bound = threshold / h2;
  result.converged = converged && true_res <= threshold;
  result.iterations = iter;
  result.dirichlet_energy = dirichlet_energy(result.field);
  return result;
}

void validate_probe(const PerturbationProbe& probe) {
  require(probe.h_field.grid != nullptr, "probe has no grid");
  const Grid3& g = *probe.h_field.grid;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!interior(g, n) && probe.h_field[n] != 0.0) {
      std::ostringstream msg;
      msg << "perturbation is nonzero at non-Interior node " << n;
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }
  require(probe.h_field.all_finite(), "perturbation must be finite");
}

PerturbationProbe random_probe(GridPtr grid, std::uint64_t seed, double amplitude, std::vector<double> x_samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  PerturbationProbe probe{ScalarField(grid), std::move(x_samples)};
  for (std::size_t n = 0; n < grid->size(); ++n)
    if (interior(*grid, n)) probe.h_field.values[n] = dist(rng);
  return probe;
}

ExpansionCheck perturbation_expansion_check(const ScalarField& u, const PerturbationProbe& probe) {
  validate_probe(probe);
  require_same_grid(u, probe.h_field);
  const double du = dirichlet_energy(u);
  const double duh = dirichlet_form(u, probe.h_field);
  const double dh = dirichlet_energy(probe.h_field);
  ExpansionCheck out;
  for (double x : probe.x_samples) {
    const double direct = dirichlet_energy(axpy(u, x, probe.h_field));
    const double expanded = du + 2.0 * x * duh + x * x * dh;
    const double dev = std::abs(direct - expanded);
    out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
    out.max_rel_deviation = std::max(out.max_rel_deviation, dev / (1.0 + std::abs(direct)));
  }
  return out;
}

MinimalityCheck minimality_check(const SolveResult& result, const std::vector<PerturbationProbe>& probes,
                                 const MinimalityOptions& options) {
  MinimalityCheck out;
  out.min_relative_gain = std::numeric_limits<double>::infinity();
  const ScalarField& u = result.field;
  const double du = dirichlet_energy(u);
  for (const auto& probe : probes) {
    validate_probe(probe);
    require_same_grid(u, probe.h_field);
    const double dh = dirichlet_energy(probe.h_field);
    if (dh == 0.0) continue;
    const double duh = dirichlet_form(u, probe.h_field);
    const double fv_scale = std::sqrt(du * dh);
    const double fv = fv_scale > 0.0 ? std::abs(duh) / fv_scale : std::abs(duh);
    out.max_first_variation = std::max(out.max_first_variation, fv);
    if (fv > options.first_variation_tol) out.all_pass = false;
    for (double x : probe.x_samples) {
      const double scale = du + x * x * dh;
      const double gain = dirichlet_energy(axpy(u, x, probe.h_field)) - du;
      const double rel = scale > 0.0 ? gain / scale : 0.0;
      out.min_relative_gain = std::min(out.min_relative_gain, rel);
      if (rel < -options.energy_tol) out.all_pass = false;
    }
  }
  if (!std::isfinite(out.min_relative_gain)) out.min_relative_gain = 0.0;
  return out;
}

ScalarField nearest_boundary_extension(const BoundaryData& f) {
  const Grid3& g = *f.grid();
  ScalarField out(f.grid(), f.values());
  std::vector<bool> reached(g.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t n = 0; n < g.size(); ++n)
    if (g.kind(n) == NodeKind::Boundary) {
      reached[n] = true;
      queue.push_back(n);
    }
  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    for (int a = 0; a < 3; ++a)
      for (int d : {-1, 1}) {
        if (!g.has_neighbor(n, a, d)) continue;
        const std::size_t m = g.neighbor(n, a, d);
        if (reached[m] || !interior(g, m)) continue;
        reached[m] = true;
        out.values[m] = out.values[n];
        queue.push_back(m);
      }
  }
  return out;
}

}  // namespace dirichlet
