#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tci/domain.hpp"

namespace tci {
namespace {

constexpr double pi = std::numbers::pi;

double integrate(const InteriorQuadrature& q, auto&& f) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < q.size(); ++k) total += q.weights(k) * f(q.nodes.col(k));
  return total;
}

TEST(RectUnion, LShapeAreaAndMembership) {
  const auto l = RectUnion::l_shape();
  EXPECT_DOUBLE_EQ(l.area(), 3.0);
  EXPECT_TRUE(l.contains(1.5, 0.5));
  EXPECT_TRUE(l.contains(0.5, 1.5));
  EXPECT_FALSE(l.contains(1.5, 1.5));
  EXPECT_THROW(RectUnion({{0, 0, 0, 1}}), InvalidArgument);
}

TEST(RectUnion, BoundaryDeduplicatesSharedEdges) {
  // Two unit squares sharing the edge x = 1 form a 2x1 rectangle.
  const Domain strip(RectUnion({{0, 0, 1, 1}, {1, 0, 2, 1}}));
  const auto mesh = boundary_quadrature(strip, 16);
  EXPECT_NEAR(mesh.total_weight(), 6.0, 1e-12);
  for (Eigen::Index k = 0; k < mesh.size(); ++k) EXPECT_NE(mesh.nodes(0, k), 1.0);
}

TEST(RectUnion, LShapePerimeterAndNormals) {
  const Domain l(RectUnion::l_shape());
  const auto mesh = boundary_quadrature(l, 32);
  EXPECT_NEAR(mesh.total_weight(), 8.0, 1e-12);
  // Divergence theorem: integral of x . nu over the boundary = 2 |Omega|.
  double flux = 0.0;
  for (Eigen::Index k = 0; k < mesh.size(); ++k)
    flux += mesh.weights(k) * mesh.nodes.col(k).dot(mesh.normals.col(k));
  EXPECT_NEAR(flux, 6.0, 1e-12);
}

TEST(InteriorQuadrature, VolumesAndSecondMoments) {
  // Disk: integral of |x|^2 = pi / 2.
  const auto disk = interior_quadrature(Domain(ConvexBody::ball(2, 1.0)), 128);
  EXPECT_NEAR(disk.total_weight(), pi, 1e-3);
  EXPECT_NEAR(integrate(disk, [](const auto& x) { return x.squaredNorm(); }), pi / 2, 1e-3);

  const auto square = interior_quadrature(Domain(ConvexBody::cube(2, 1.0)), 64);
  EXPECT_NEAR(square.total_weight(), 1.0, 1e-12);
  EXPECT_NEAR(integrate(square, [](const auto& x) { return x.squaredNorm(); }), 1.0 / 6.0,
              1e-4);

  const auto ball3 = interior_quadrature(Domain(ConvexBody::ball(3, 1.0)), 32);
  EXPECT_NEAR(ball3.total_weight(), 4.0 * pi / 3.0, 1e-2);

  const auto l = interior_quadrature(Domain(RectUnion::l_shape()), 64);
  EXPECT_NEAR(l.total_weight(), 3.0, 1e-12);

  const auto diamond = interior_quadrature(Domain(ConvexBody::l1_ball(2, 1.0)), 32);
  EXPECT_NEAR(diamond.total_weight(), 2.0, 1e-12);
  // Integral of x^2 over |x|+|y| <= 1 is 1/3.
  EXPECT_NEAR(integrate(diamond, [](const auto& x) { return x(0) * x(0); }), 1.0 / 3.0, 1e-3);
}

TEST(InteriorQuadrature, MidpointConvergenceIsSecondOrder) {
  const Domain disk(ConvexBody::ball(2, 1.0));
  auto err = [&](int res) {
    const auto q = interior_quadrature(disk, res);
    return std::abs(integrate(q, [](const auto& x) { return std::exp(x(0)); }) -
                    2.0 * pi * std::cyl_bessel_i(1.0, 1.0));
  };
  EXPECT_GT(err(32) / err(64), 3.0);
}

TEST(InteriorQuadrature, AffineImagePushesForward) {
  Matrix A(2, 2);
  A << 2.0, 0.5, 0.0, 1.0;
  Vector b(2);
  b << 1.0, -1.0;
  const Domain ellipse(apply_affine(ConvexBody::ball(2, 1.0), A, b));
  const auto q = interior_quadrature(ellipse, 64);
  EXPECT_NEAR(q.total_weight(), 2.0 * pi, 1e-2);
  const Vector centroid = q.nodes * q.weights / q.total_weight();
  EXPECT_NEAR(centroid(0), 1.0, 1e-10);
  EXPECT_NEAR(centroid(1), -1.0, 1e-10);
}

TEST(InteriorQuadrature, UnsupportedHighDimension) {
  EXPECT_THROW(interior_quadrature(Domain(ConvexBody::ball(4, 1.0)), 8), QuadratureUnsupported);
}

TEST(Domain, ScalingScalesVolume) {
  const Domain l(RectUnion::l_shape());
  EXPECT_NEAR(l.scaled(2.0).volume(), 12.0, 1e-12);
  const Domain disk(ConvexBody::ball(2, 1.0));
  EXPECT_NEAR(disk.scaled(3.0).volume(), 9.0 * pi, 1e-12);
}

}  // namespace
}  // namespace tci
