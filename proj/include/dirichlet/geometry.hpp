#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dirichlet/vec3.hpp"

namespace dirichlet {

struct Box {
  Vec3 lo;
  Vec3 hi;
};

struct Ball {
  Vec3 center;
  double radius = 1.0;
};

/// Bounded open region Omega with boundary S. Only axis-aligned boxes and
/// balls are supported.
class Domain {
 public:
  static Domain box(const Vec3& lo, const Vec3& hi);
  static Domain ball(const Vec3& center, double radius);

  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  const Box& as_box() const { return std::get<Box>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }

  /// Negative inside, zero on S, positive outside.
  double signed_distance(const Vec3& p) const;
  /// True when p lies in Omega at least `margin` away from S.
  bool contains(const Vec3& p, double margin = 0.0) const { return signed_distance(p) < -margin; }
  /// Euclidean nearest point of the closed domain.
  Vec3 project(const Vec3& p) const;
  /// Removes from `direction` the components that would leave the closed
  /// domain at p (tangent-cone projection). Only active constraints on S
  /// (within `tol`) are considered.
  Vec3 tangent_cone(const Vec3& p, const Vec3& direction, double tol) const;

  Vec3 bounds_lo() const;
  Vec3 bounds_hi() const;
  Vec3 centroid() const;
  double surface_area() const;
  double volume() const;
  /// Smallest extent of the domain; used to scale tolerances.
  double feature_size() const;

 private:
  explicit Domain(std::variant<Box, Ball> shape) : shape_(shape) {}
  std::variant<Box, Ball> shape_;
};

enum class NodeKind : std::uint8_t { Interior, Boundary, Exterior };

struct GridCounts {
  std::size_t interior = 0;
  std::size_t boundary = 0;
  std::size_t exterior = 0;
};

/// Uniform isotropic grid over the (padded) bounding box of a domain. Node
/// (i, j, k) sits at origin + h * (i, j, k).
class Grid3 {
 public:
  Grid3(Domain domain, Vec3 origin, double spacing, std::array<std::size_t, 3> dims,
        std::vector<NodeKind> mask);

  const Domain& domain() const { return domain_; }
  const Vec3& origin() const { return origin_; }
  double spacing() const { return h_; }
  const std::array<std::size_t, 3>& dims() const { return dims_; }
  std::size_t size() const { return mask_.size(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims_[0] * (j + dims_[1] * k);
  }
  std::array<std::size_t, 3> ijk(std::size_t node) const {
    return {node % dims_[0], (node / dims_[0]) % dims_[1], node / (dims_[0] * dims_[1])};
  }
  Vec3 position(std::size_t node) const;
  Vec3 position(std::size_t i, std::size_t j, std::size_t k) const {
    return {origin_.x + h_ * static_cast<double>(i), origin_.y + h_ * static_cast<double>(j),
            origin_.z + h_ * static_cast<double>(k)};
  }

  NodeKind kind(std::size_t node) const { return mask_[node]; }
  std::span<const NodeKind> mask() const { return mask_; }
  GridCounts counts() const;

  /// True when all six axis neighbours exist in the grid.
  bool has_full_stencil(std::size_t node) const;
  /// Neighbour along `axis` in direction `dir` (+1 / -1). Requires existence.
  std::size_t neighbor(std::size_t node, int axis, int dir) const {
    const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? dims_[0] : dims_[0] * dims_[1]);
    return dir > 0 ? node + stride : node - stride;
  }
  /// Whether the neighbour along `axis`/`dir` exists.
  bool has_neighbor(std::size_t node, int axis, int dir) const;

  bool same_layout(const Grid3& other) const;

 private:
  Domain domain_;
  Vec3 origin_;
  double h_;
  std::array<std::size_t, 3> dims_;
  std::vector<NodeKind> mask_;
};

using GridPtr = std::shared_ptr<const Grid3>;

/// Classifies nodes of the padded bounding-box lattice. Throws
/// ErrorCode::DomainTooSmall if no node is Interior.
GridPtr build_grid(const Domain& domain, double h, double padding);

/// One real per grid node.
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
  ScalarField(GridPtr g, std::vector<double> v);

  template <class Fn>
  static ScalarField sample(GridPtr g, Fn&& fn) {
    ScalarField f(g);
    for (std::size_t n = 0; n < g->size(); ++n) f.values[n] = fn(g->position(n));
    return f;
  }

  double operator[](std::size_t node) const { return values[node]; }
  double& operator[](std::size_t node) { return values[node]; }
  bool all_finite() const;
};

struct Panel {
  Vec3 centroid;
  double area = 0.0;
  Vec3 normal;
};

/// Panelization of S with outward unit normals.
struct SurfaceMesh {
  std::vector<Panel> panels;

  std::size_t size() const { return panels.size(); }
  double total_area() const;
};

/// Box: n x n subdivision of each face. Ball: n latitude bands of equal polar
/// angle, each split into round(2 n sin(theta_mid)) (at least 3) equal-area
/// panels; centroids lie on the sphere at the area-midpoint latitude.
SurfaceMesh panelize(const Domain& domain, int n);

struct ProbePoints {
  std::vector<Vec3> outside;
  std::vector<Vec3> inside;
};

/// centroid +/- offset * normal for every panel.
ProbePoints normal_probe_points(const SurfaceMesh& mesh, double offset);

// Serialization. CSV column orders: fields x,y,z,value; panels
// cx,cy,cz,area,nx,ny,nz. NaN field entries are not written, so a partial
// field round-trips through read_field_csv.
std::string grid_metadata_json(const Grid3& grid);
void write_field_csv(const ScalarField& field, std::ostream& out);
void write_mesh_csv(const SurfaceMesh& mesh, std::ostream& out);
/// Reads x,y,z,value rows and matches them to nodes of `grid`. Nodes that are
/// not listed stay NaN. Throws GridMismatch on coordinates off the lattice.
ScalarField read_field_csv(GridPtr grid, std::istream& in);
SurfaceMesh read_mesh_csv(std::istream& in);

}  // namespace dirichlet
