#include "dirichlet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dirichlet/csv.hpp"
#include "dirichlet/error.hpp"
#include "json.hpp"

namespace dirichlet {

namespace {

bool finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

}  // namespace

Domain Domain::box(const Vec3& lo, const Vec3& hi) {
  require(finite(lo) && finite(hi), "box corners must be finite");
  require(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z, "box requires lo < hi componentwise");
  return Domain(Box{lo, hi});
}

Domain Domain::ball(const Vec3& center, double radius) {
  require(finite(center), "ball center must be finite");
  require(std::isfinite(radius) && radius > 0.0, "ball radius must be positive");
  return Domain(Ball{center, radius});
}

double Domain::signed_distance(const Vec3& p) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return distance(p, b->center) - b->radius;
  const auto& bx = std::get<Box>(shape_);
  Vec3 q;
  for (int a = 0; a < 3; ++a) q[a] = std::max(bx.lo[a] - p[a], p[a] - bx.hi[a]);
  const Vec3 qpos{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
  return norm(qpos) + std::min(std::max({q.x, q.y, q.z}), 0.0);
}

Vec3 Domain::project(const Vec3& p) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const Vec3 d = p - b->center;
    const double r = norm(d);
    if (r <= b->radius) return p;
    return b->center + d * (b->radius / r);
  }
  const auto& bx = std::get<Box>(shape_);
  return {std::clamp(p.x, bx.lo.x, bx.hi.x), std::clamp(p.y, bx.lo.y, bx.hi.y),
          std::clamp(p.z, bx.lo.z, bx.hi.z)};
}

Vec3 Domain::tangent_cone(const Vec3& p, const Vec3& direction, double tol) const {
  Vec3 d = direction;
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const Vec3 r = p - b->center;
    const double len = norm(r);
    if (len >= b->radius - tol && len > 0.0) {
      const Vec3 n = r * (1.0 / len);
      const double outward = dot(d, n);
      if (outward > 0.0) d -= n * outward;
    }
    return d;
  }
  const auto& bx = std::get<Box>(shape_);
  for (int a = 0; a < 3; ++a) {
    if (p[a] >= bx.hi[a] - tol && d[a] > 0.0) d[a] = 0.0;
    if (p[a] <= bx.lo[a] + tol && d[a] < 0.0) d[a] = 0.0;
  }
  return d;
}

Vec3 Domain::bounds_lo() const {
  if (const auto* b = std::get_if<Ball>(&shape_))
    return b->center - Vec3{b->radius, b->radius, b->radius};
  return std::get<Box>(shape_).lo;
}

Vec3 Domain::bounds_hi() const {
  if (const auto* b = std::get_if<Ball>(&shape_))
    return b->center + Vec3{b->radius, b->radius, b->radius};
  return std::get<Box>(shape_).hi;
}

Vec3 Domain::centroid() const { return (bounds_lo() + bounds_hi()) * 0.5; }

double Domain::surface_area() const {
  if (const auto* b = std::get_if<Ball>(&shape_))
    return 4.0 * std::numbers::pi * b->radius * b->radius;
  const Vec3 e = std::get<Box>(shape_).hi - std::get<Box>(shape_).lo;
  return 2.0 * (e.x * e.y + e.y * e.z + e.z * e.x);
}

double Domain::volume() const {
  if (const auto* b = std::get_if<Ball>(&shape_))
    return 4.0 / 3.0 * std::numbers::pi * b->radius * b->radius * b->radius;
  const Vec3 e = std::get<Box>(shape_).hi - std::get<Box>(shape_).lo;
  return e.x * e.y * e.z;
}

double Domain::feature_size() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return 2.0 * b->radius;
  const Vec3 e = std::get<Box>(shape_).hi - std::get<Box>(shape_).lo;
  return std::min({e.x, e.y, e.z});
}

Grid3::Grid3(Domain domain, Vec3 origin, double spacing, std::array<std::size_t, 3> dims,
             std::vector<NodeKind> mask)
    : domain_(domain), origin_(origin), h_(spacing), dims_(dims), mask_(std::move(mask)) {
  require(mask_.size() == dims_[0] * dims_[1] * dims_[2], "grid mask size mismatch");
}

Vec3 Grid3::position(std::size_t node) const {
  const auto [i, j, k] = ijk(node);
  return position(i, j, k);
}

GridCounts Grid3::counts() const {
  GridCounts c;
  for (NodeKind kind : mask_) {
    switch (kind) {
      case NodeKind::Interior: ++c.interior; break;
      case NodeKind::Boundary: ++c.boundary; break;
      case NodeKind::Exterior: ++c.exterior; break;
    }
  }
  return c;
}

bool Grid3::has_neighbor(std::size_t node, int axis, int dir) const {
  const std::size_t c = ijk(node)[static_cast<std::size_t>(axis)];
  return dir > 0 ? c + 1 < dims_[static_cast<std::size_t>(axis)] : c > 0;
}

bool Grid3::has_full_stencil(std::size_t node) const {
  const auto c = ijk(node);
  for (std::size_t a = 0; a < 3; ++a)
    if (c[a] == 0 || c[a] + 1 >= dims_[a]) return false;
  return true;
}

bool Grid3::same_layout(const Grid3& other) const {
  return dims_ == other.dims_ && h_ == other.h_ && origin_ == other.origin_ &&
         std::equal(mask_.begin(), mask_.end(), other.mask_.begin());
}

GridPtr build_grid(const Domain& domain, double h, double padding) {
  require(std::isfinite(h) && h > 0.0, "grid spacing h must be positive");
  require(std::isfinite(padding) && padding >= 0.0, "padding must be nonnegative");

  const Vec3 lo = domain.bounds_lo() - Vec3{padding, padding, padding};
  const Vec3 hi = domain.bounds_hi() + Vec3{padding, padding, padding};
  std::array<std::size_t, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    const double extent = hi[a] - lo[a];
    auto n = static_cast<std::size_t>(std::floor(extent / h + 1e-9)) + 1;
    if (lo[a] + h * static_cast<double>(n - 1) < hi[a] - 1e-9 * h) ++n;
    dims[static_cast<std::size_t>(a)] = n;
  }
  const std::size_t total = dims[0] * dims[1] * dims[2];
  require(total <= (std::size_t{1} << 31), "grid too large; increase h");

  // Strictly inside, with a relative margin so nodes that land on S up to
  // rounding are not treated as Interior.
  const double margin = 1e-9 * h;
  std::vector<NodeKind> mask(total, NodeKind::Exterior);
  Grid3 probe(domain, lo, h, dims, mask);
  std::size_t interior = 0;
  for (std::size_t n = 0; n < total; ++n) {
    if (probe.has_full_stencil(n) && domain.contains(probe.position(n), margin)) {
      mask[n] = NodeKind::Interior;
      ++interior;
    }
  }
  if (interior == 0) {
    std::ostringstream msg;
    msg << "no Interior node at h=" << h;
    throw Error(ErrorCode::DomainTooSmall, msg.str());
  }
  Grid3 staged(domain, lo, h, dims, mask);
  for (std::size_t n = 0; n < total; ++n) {
    if (mask[n] == NodeKind::Interior) continue;
    for (int a = 0; a < 3 && mask[n] != NodeKind::Boundary; ++a)
      for (int d : {-1, 1})
        if (staged.has_neighbor(n, a, d) && staged.kind(staged.neighbor(n, a, d)) == NodeKind::Interior)
          mask[n] = NodeKind::Boundary;
  }
  return std::make_shared<const Grid3>(domain, lo, h, dims, std::move(mask));
}

ScalarField::ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require(grid != nullptr, "field requires a grid");
  require(values.size() == grid->size(), "field value count does not match grid");
}

bool ScalarField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double SurfaceMesh::total_area() const {
  double s = 0.0;
  for (const auto& p : panels) s += p.area;
  return s;
}

namespace {

void panelize_box(const Box& bx, int n, SurfaceMesh& mesh) {
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    const double du = (bx.hi[u] - bx.lo[u]) / n;
    const double dv = (bx.hi[v] - bx.lo[v]) / n;
    for (int side : {-1, 1}) {
      Vec3 normal;
      normal[axis] = side;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          Vec3 c;
          c[axis] = side > 0 ? bx.hi[axis] : bx.lo[axis];
          c[u] = bx.lo[u] + (a + 0.5) * du;
          c[v] = bx.lo[v] + (b + 0.5) * dv;
          mesh.panels.push_back({c, du * dv, normal});
        }
      }
    }
  }
}

void panelize_ball(const Ball& ball, int n, SurfaceMesh& mesh) {
  const double pi = std::numbers::pi;
  const double r2 = ball.radius * ball.radius;
  for (int band = 0; band < n; ++band) {
    const double t0 = pi * band / n;
    const double t1 = pi * (band + 1) / n;
    const double c0 = std::cos(t0);
    const double c1 = std::cos(t1);
    const double band_area = 2.0 * pi * r2 * (c0 - c1);
    const int m = std::max(3, static_cast<int>(std::lround(2.0 * n * std::sin(0.5 * (t0 + t1)))));
    const double cos_mid = 0.5 * (c0 + c1);
    const double sin_mid = std::sqrt(std::max(0.0, 1.0 - cos_mid * cos_mid));
    for (int l = 0; l < m; ++l) {
      const double phi = 2.0 * pi * (l + 0.5) / m;
      const Vec3 normal{sin_mid * std::cos(phi), sin_mid * std::sin(phi), cos_mid};
      mesh.panels.push_back({ball.center + normal * ball.radius, band_area / m, normal});
    }
  }
}

}  // namespace

SurfaceMesh panelize(const Domain& domain, int n) {
  require(n >= 1, "panel resolution n must be >= 1");
  SurfaceMesh mesh;
  if (domain.is_box())
    panelize_box(domain.as_box(), n, mesh);
  else
    panelize_ball(domain.as_ball(), n, mesh);
  return mesh;
}

ProbePoints normal_probe_points(const SurfaceMesh& mesh, double offset) {
  require(std::isfinite(offset) && offset > 0.0, "probe offset must be positive");
  ProbePoints pts;
  pts.outside.reserve(mesh.size());
  pts.inside.reserve(mesh.size());
  for (const auto& p : mesh.panels) {
    pts.outside.push_back(p.centroid + p.normal * offset);
    pts.inside.push_back(p.centroid - p.normal * offset);
  }
  return pts;
}

std::string grid_metadata_json(const Grid3& grid) {
  const GridCounts c = grid.counts();
  nlohmann::ordered_json j;
  j["origin"] = {grid.origin().x, grid.origin().y, grid.origin().z};
  j["spacing"] = grid.spacing();
  j["dims"] = {grid.dims()[0], grid.dims()[1], grid.dims()[2]};
  j["counts"] = {{"interior", c.interior}, {"boundary", c.boundary}, {"exterior", c.exterior}};
  const Domain& d = grid.domain();
  if (d.is_box()) {
    const Box& b = d.as_box();
    j["domain"] = {{"kind", "box"}, {"lo", {b.lo.x, b.lo.y, b.lo.z}}, {"hi", {b.hi.x, b.hi.y, b.hi.z}}};
  } else {
    const Ball& b = d.as_ball();
    j["domain"] = {{"kind", "ball"},
                   {"center", {b.center.x, b.center.y, b.center.z}},
                   {"radius", b.radius}};
  }
  j["csv_columns"] = {"x", "y", "z", "value"};
  return j.dump(2);
}

void write_field_csv(const ScalarField& field, std::ostream& out) {
  out << "x,y,z,value\n";
  for (std::size_t n = 0; n < field.values.size(); ++n) {
    if (std::isnan(field.values[n])) continue;
    const Vec3 p = field.grid->position(n);
    csv::write_row(out, {p.x, p.y, p.z, field.values[n]});
  }
}

void write_mesh_csv(const SurfaceMesh& mesh, std::ostream& out) {
  out << "cx,cy,cz,area,nx,ny,nz\n";
  for (const auto& p : mesh.panels)
    csv::write_row(out, {p.centroid.x, p.centroid.y, p.centroid.z, p.area, p.normal.x, p.normal.y,
                         p.normal.z});
}

ScalarField read_field_csv(GridPtr grid, std::istream& in) {
  ScalarField field(grid);
  std::fill(field.values.begin(), field.values.end(), std::numeric_limits<double>::quiet_NaN());
  const double h = grid->spacing();
  std::size_t line_no = 1;
  for (const auto& row : csv::read_numeric(in, {"x", "y", "z", "value"})) {
    ++line_no;
    std::array<std::size_t, 3> c{};
    for (std::size_t a = 0; a < 3; ++a) {
      const double t = (row[a] - grid->origin()[static_cast<int>(a)]) / h;
      const double r = std::round(t);
      if (std::abs(t - r) > 1e-6 || r < 0 || r >= static_cast<double>(grid->dims()[a])) {
        std::ostringstream msg;
        msg << "field csv line " << line_no << ": point (" << row[0] << "," << row[1] << ","
            << row[2] << ") is not a grid node";
        throw Error(ErrorCode::GridMismatch, msg.str());
      }
      c[a] = static_cast<std::size_t>(r);
    }
    field.values[grid->index(c[0], c[1], c[2])] = row[3];
  }
  return field;
}

SurfaceMesh read_mesh_csv(std::istream& in) {
  SurfaceMesh mesh;
  for (const auto& row : csv::read_numeric(in, {"cx", "cy", "cz", "area", "nx", "ny", "nz"})) {
    Panel p{{row[0], row[1], row[2]}, row[3], {row[4], row[5], row[6]}};
    require(p.area > 0.0, "panel area must be positive");
    require(std::abs(norm(p.normal) - 1.0) <= 1e-12, "panel normal must be unit length");
    mesh.panels.push_back(p);
  }
  return mesh;
}

}  // namespace dirichlet
