#pragma once

// Integration domains: convex bodies plus planar unions of axis-aligned
// rectangles (the non-convex family used for the trace inequality), with
// deterministic interior and boundary quadrature.

#include <variant>
#include <vector>

#include "tci/geometry.hpp"

namespace tci {

struct Rect {
  double x0, y0, x1, y1;
};

/// Union of closed axis-aligned rectangles in the plane. Overlaps and shared
/// edges are resolved by decomposing into the cells of the coordinate grid.
class RectUnion {
 public:
  explicit RectUnion(std::vector<Rect> rects);

  /// [0,2]x[0,1] ∪ [0,1]x[0,2], scaled by `size`.
  static RectUnion l_shape(double size = 1.0);

  const std::vector<Rect>& rects() const { return rects_; }
  double area() const;
  bool contains(double x, double y) const;
  RectUnion scaled(double factor) const;

  // Cell decomposition.
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  bool cell_inside(long i, long j) const;

 private:
  std::vector<Rect> rects_;
  std::vector<double> xs_, ys_;
  std::vector<char> inside_;
};

class Domain {
 public:
  Domain(ConvexBody body) : shape_(std::move(body)) {}  // NOLINT(google-explicit-constructor)
  Domain(RectUnion region) : shape_(std::move(region)) {}  // NOLINT(google-explicit-constructor)

  int dim() const;
  /// Lebesgue measure (closed form where available, MC value otherwise).
  double volume() const;
  bool contains(const Eigen::Ref<const Vector>& x) const;
  Domain scaled(double factor) const;

  const ConvexBody* body() const { return std::get_if<ConvexBody>(&shape_); }
  const RectUnion* rect_union() const { return std::get_if<RectUnion>(&shape_); }

 private:
  std::variant<ConvexBody, RectUnion> shape_;
};

struct InteriorQuadrature {
  Matrix nodes;    // dim x count
  Vector weights;  // Lebesgue measure per node; sums to |Omega|
  int resolution = 0;

  Eigen::Index size() const { return weights.size(); }
  double total_weight() const { return weights.sum(); }
};

/// Midpoint-type rules with O(h^2) error: tensor grids for intervals, cubes
/// and rectangle unions, polar/spherical grids for balls (n = 2, 3),
/// subdivided fan triangulations for polygons, push-forward for affine
/// images. Throws QuadratureUnsupported for n >= 4 and 3-D polytopes other
/// than (images of) cubes.
InteriorQuadrature interior_quadrature(const Domain& domain, int resolution);

BoundaryMesh boundary_quadrature(const Domain& domain, int resolution);

}  // namespace tci
