#pragma once

// Convex bodies: balls, cubes and l1-balls centred at the origin, bounded
// H-polytopes, and invertible affine images of those. Values are immutable
// and cheap to copy (shared representation), so every operation below is
// safe to call concurrently.

#include <memory>
#include <utility>
#include <vector>

#include "tci/core.hpp"

namespace tci {

/// Half-space normal·x <= offset.
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
};

class ConvexBody {
 public:
  enum class Kind { ball, cube, l1_ball, h_polytope, affine };

  static ConvexBody ball(int dim, double radius);
  static ConvexBody cube(int dim, double side);
  static ConvexBody l1_ball(int dim, double radius);
  /// Throws InvalidArgument if the polytope is unbounded or has empty
  /// interior.
  static ConvexBody h_polytope(std::vector<HalfSpace> rows);
  /// The open interval (lo, hi) as an affine image of the unit 1-cube.
  static ConvexBody interval(double lo, double hi);

  Kind kind() const;
  int dim() const;

  // Variant parameters; calling the wrong accessor throws InvalidArgument.
  double radius() const;
  double side() const;
  const std::vector<HalfSpace>& rows() const;
  const ConvexBody& base() const;
  const Matrix& linear() const;
  const Matrix& linear_inverse() const;
  const Vector& shift() const;

  /// H-polytope constraint data as a matrix pair (A x <= b).
  const Matrix& row_matrix() const;
  const Vector& row_offsets() const;
  /// A point well inside the body (origin for the centred variants).
  const Vector& interior_point() const;

  struct Data;
  explicit ConvexBody(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

 private:
  friend struct BodyAccess;
  std::shared_ptr<const Data> data_;
};

struct VolumeOptions {
  std::int64_t samples = 400'000;
  Seed seed = 0x5EEDu;
};

/// Volume of the Euclidean unit ball, pi^{n/2} / Gamma(1 + n/2).
double unit_ball_volume(int n);

/// Exact for closed-form variants (std_error = 0); rejection sampling from
/// the bounding box for H-polytopes.
Estimate volume(const ConvexBody& body, const VolumeOptions& options = {});

bool contains(const ConvexBody& body, const Eigen::Ref<const Vector>& x);

/// The chord {x + t d : t} ∩ body as [t_lo, t_hi]; x must lie inside.
std::pair<double, double> chord(const ConvexBody& body,
                                const Eigen::Ref<const Vector>& x,
                                const Eigen::Ref<const Vector>& d);

/// A maximiser of <u, x> over the body.
Vector support_point(const ConvexBody& body, const Eigen::Ref<const Vector>& u);
double support(const ConvexBody& body, const Eigen::Ref<const Vector>& u);

/// Axis-aligned bounding box (exact per-coordinate support).
std::pair<Vector, Vector> bounding_box(const ConvexBody& body);

/// x -> linear·x + shift applied to the body; nested images are flattened.
ConvexBody apply_affine(const ConvexBody& body, const Matrix& linear,
                        const Vector& shift);
ConvexBody scale(const ConvexBody& body, double factor);
ConvexBody translate(const ConvexBody& body, const Vector& offset);

/// Pure rescaling about the origin to unit volume.
ConvexBody normalize_to_volume_one(const ConvexBody& body,
                                   const VolumeOptions& options = {});

/// Half-space description of a polytopal body (cube, l1-ball, H-polytope
/// and their affine images). Throws InvalidArgument for balls.
std::vector<HalfSpace> half_spaces(const ConvexBody& body);
bool is_polytope(const ConvexBody& body);

/// Vertices of a polytopal body of dimension <= 3 (enumeration of row
/// subsets).
std::vector<Vector> polytope_vertices(const ConvexBody& body);

struct BoundaryMesh {
  Matrix nodes;    // dim x count
  Vector weights;  // (n-1)-dimensional Hausdorff measure per node
  Matrix normals;  // outer unit normals, dim x count
  int resolution = 0;

  Eigen::Index size() const { return weights.size(); }
  double total_weight() const { return weights.sum(); }
};

/// Boundary quadrature: per-facet midpoint grids for polytopes (n <= 3),
/// latitude-longitude grid for balls with n <= 3, random equal-weight nodes
/// for balls with n >= 4. Affine images push nodes forward and rescale the
/// weights by the local area distortion.
BoundaryMesh boundary_quadrature(const ConvexBody& body, int resolution);

/// Structural 64-bit hash (variant, dimension, parameters, nested maps).
std::uint64_t fingerprint(const ConvexBody& body);

/// Surface area, exact where a closed form exists (ball, cube, l1-ball).
double surface_area(const ConvexBody& body);

}  // namespace tci
