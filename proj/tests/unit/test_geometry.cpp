#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tci/geometry.hpp"

namespace tci {
namespace {

constexpr double pi = std::numbers::pi;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

ConvexBody unit_square_polytope() {
  std::vector<HalfSpace> rows;
  for (int i = 0; i < 2; ++i)
    for (double s : {1.0, -1.0}) {
      Vector a = Vector::Zero(2);
      a(i) = s;
      rows.push_back({a, 0.5});
    }
  return ConvexBody::h_polytope(rows);
}

Matrix rotation(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

TEST(UnitBallVolume, ClosedForms) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_NEAR(unit_ball_volume(2), pi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * pi / 3.0, 1e-14);
  EXPECT_THROW(unit_ball_volume(0), DomainError);
}

TEST(UnitBallVolume, MatchesRecurrenceUpTo100) {
  // omega_n = 2 pi / n * omega_{n-2}, omega_0 = 1, omega_1 = 2.
  double even = 1.0, odd = 2.0;
  for (int n = 2; n <= 100; ++n) {
    double& w = (n % 2 == 0) ? even : odd;
    w *= 2.0 * pi / n;
    EXPECT_NEAR(unit_ball_volume(n) / w, 1.0, 1e-12) << "n = " << n;
  }
}

TEST(Volume, ClosedFormVariants) {
  EXPECT_NEAR(volume(ConvexBody::ball(2, 1.0)).value, pi, 1e-14);
  EXPECT_NEAR(volume(ConvexBody::l1_ball(3, 1.0)).value, 8.0 / 6.0, 1e-14);
  for (int n = 1; n <= 6; ++n) {
    const auto v = volume(ConvexBody::cube(n, 1.0));
    EXPECT_DOUBLE_EQ(v.value, 1.0);
    EXPECT_EQ(v.std_error, 0.0);
  }
}

TEST(Volume, HPolytopeMonteCarlo) {
  // The square fills its bounding box, so hit-or-miss is exact there.
  const auto sq = volume(unit_square_polytope());
  EXPECT_DOUBLE_EQ(sq.value, 1.0);
  const auto tri = ConvexBody::h_polytope(
      {{vec({-1, 0}), 0.0}, {vec({0, -1}), 0.0}, {vec({1, 1}), 1.0}});
  const auto v = volume(tri);
  EXPECT_GT(v.std_error, 0.0);
  EXPECT_NEAR(v.value, 0.5, 3.0 * v.std_error);
  EXPECT_THROW(volume(unit_square_polytope(), {0, 1}), InvalidArgument);
}

TEST(Volume, AffineImageScalesByDeterminant) {
  Matrix A(2, 2);
  A << 2.0, 0.3, -0.1, 0.7;
  const double det = std::abs(A.determinant());
  const auto ball = ConvexBody::ball(2, 1.0);
  EXPECT_NEAR(volume(apply_affine(ball, A, vec({1, 2}))).value, det * pi, 1e-12);
  const auto mc = volume(apply_affine(unit_square_polytope(), A, vec({0, 0})));
  EXPECT_NEAR(mc.value, det, 3.0 * mc.std_error);
}

TEST(Contains, VariantExamples) {
  EXPECT_TRUE(contains(ConvexBody::ball(3, 1.0), Vector::Zero(3)));
  EXPECT_FALSE(contains(ConvexBody::cube(3, 1.0), vec({0.6, 0, 0})));
  EXPECT_TRUE(contains(ConvexBody::l1_ball(3, 1.0), vec({0.5, -0.29, 0.2})));
  EXPECT_THROW(contains(ConvexBody::ball(3, 1.0), Vector::Zero(2)), InvalidArgument);
}

TEST(Construction, RejectsDegenerateInputs) {
  EXPECT_THROW(ConvexBody::ball(2, 0.0), InvalidArgument);
  EXPECT_THROW(ConvexBody::cube(0, 1.0), InvalidArgument);
  // Unbounded: a single half-plane.
  EXPECT_THROW(ConvexBody::h_polytope({{vec({1, 0}), 1.0}}), InvalidArgument);
  // Flat: 0 <= x <= 0.
  EXPECT_THROW(ConvexBody::h_polytope({{vec({1, 0}), 0.0},
                                       {vec({-1, 0}), 0.0},
                                       {vec({0, 1}), 1.0},
                                       {vec({0, -1}), 1.0}}),
               InvalidArgument);
  Matrix singular(2, 2);
  singular << 1, 2, 2, 4;
  EXPECT_THROW(apply_affine(ConvexBody::ball(2, 1.0), singular, Vector::Zero(2)),
               InvalidArgument);
}

TEST(Construction, SimplexInteriorPoint) {
  const auto simplex = ConvexBody::h_polytope(
      {{vec({-1, 0}), 0.0}, {vec({0, -1}), 0.0}, {vec({1, 1}), 1.0}});
  EXPECT_TRUE(contains(simplex, simplex.interior_point()));
  const auto [lo, hi] = bounding_box(simplex);
  EXPECT_NEAR(lo(0), 0.0, 1e-12);
  EXPECT_NEAR(hi(1), 1.0, 1e-12);
}

TEST(NormalizeToVolumeOne, Examples) {
  const auto disk = normalize_to_volume_one(ConvexBody::ball(2, 1.0));
  EXPECT_NEAR(disk.linear()(0, 0), 1.0 / std::sqrt(pi), 1e-12);
  EXPECT_NEAR(volume(disk).value, 1.0, 1e-9);

  const auto cube = normalize_to_volume_one(ConvexBody::cube(4, 1.0));
  EXPECT_NEAR(cube.linear()(0, 0), 1.0, 1e-12);

  const auto diamond = normalize_to_volume_one(ConvexBody::l1_ball(2, 1.0));
  EXPECT_NEAR(diamond.linear()(0, 0), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(volume(diamond).value, 1.0, 1e-9);
}

TEST(ApplyAffine, IdentityAndScaling) {
  const auto ball = ConvexBody::ball(3, 1.0);
  const auto same = apply_affine(ball, Matrix::Identity(3, 3), Vector::Zero(3));
  EXPECT_NEAR(volume(same).value, volume(ball).value, 1e-12);
  RandomStream rng(11, 0);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = 1.2 * vec({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    EXPECT_EQ(contains(same, x), contains(ball, x));
  }
  const auto doubled = scale(ball, 2.0);
  EXPECT_NEAR(volume(doubled).value, 8.0 * volume(ball).value, 1e-12);
}

TEST(ApplyAffine, FlattensNestedImages) {
  const auto once = scale(ConvexBody::cube(2, 1.0), 2.0);
  const auto twice = translate(once, vec({1, -1}));
  EXPECT_EQ(twice.base().kind(), ConvexBody::Kind::cube);
  EXPECT_NEAR(twice.linear()(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(twice.shift()(0), 1.0, 1e-15);
}

TEST(ApplyAffine, RotatedCubeKeepsUnitVolumeByMembership) {
  const auto rotated = apply_affine(ConvexBody::cube(2, 1.0), rotation(0.4), Vector::Zero(2));
  // Hit-or-miss volume over [-1, 1]^2, independent of the determinant path.
  RandomStream rng(5, 0);
  const int m = 200000;
  int hits = 0;
  for (int k = 0; k < m; ++k)
    hits += contains(rotated, vec({rng.uniform(-1, 1), rng.uniform(-1, 1)}));
  const double p = static_cast<double>(hits) / m;
  EXPECT_NEAR(4.0 * p, 1.0, 3.0 * 4.0 * std::sqrt(p * (1 - p) / m));
  EXPECT_NEAR(volume(rotated).value, 1.0, 1e-12);
}

TEST(ApplyAffine, MembershipInvariantUnderMapAndInverse) {
  Matrix A(3, 3);
  A << 1.5, 0.2, -0.3, 0.1, 0.8, 0.4, -0.2, 0.3, 1.1;
  const Vector b = vec({0.3, -0.2, 0.5});
  for (const auto& body : {ConvexBody::ball(3, 1.0), ConvexBody::cube(3, 1.0),
                           ConvexBody::l1_ball(3, 1.0)}) {
    const auto round_trip =
        apply_affine(apply_affine(body, A, b), A.inverse(), -A.inverse() * b);
    RandomStream rng(17, 0);
    int mismatches = 0;
    for (int k = 0; k < 10000; ++k) {
      const Vector x = vec({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
      mismatches += contains(round_trip, x) != contains(body, x);
    }
    EXPECT_EQ(mismatches, 0);
  }
}

TEST(Support, MatchesClosedForms) {
  const Vector u = vec({0.6, -0.8});
  EXPECT_NEAR(support(ConvexBody::ball(2, 2.0), u), 2.0, 1e-14);
  EXPECT_NEAR(support(ConvexBody::cube(2, 1.0), u), 0.7, 1e-14);
  EXPECT_NEAR(support(ConvexBody::l1_ball(2, 1.0), u), 0.8, 1e-14);
  EXPECT_NEAR(support(unit_square_polytope(), u), 0.7, 1e-12);
}

TEST(Chord, L1BallAndPolytope) {
  const auto diamond = ConvexBody::l1_ball(2, 1.0);
  const auto [lo, hi] = chord(diamond, vec({0.1, 0.0}), vec({1.0, 0.0}));
  EXPECT_NEAR(lo, -1.1, 1e-12);
  EXPECT_NEAR(hi, 0.9, 1e-12);
  const auto [lo2, hi2] = chord(diamond, vec({0.0, 0.0}), vec({1.0, 1.0}).normalized());
  EXPECT_NEAR(hi2, std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(lo2, -std::sqrt(0.5), 1e-12);
  const auto [lo3, hi3] = chord(unit_square_polytope(), vec({0.0, 0.25}), vec({0.0, 1.0}));
  EXPECT_NEAR(lo3, -0.75, 1e-12);
  EXPECT_NEAR(hi3, 0.25, 1e-12);
}

void expect_valid_mesh(const ConvexBody& body, const BoundaryMesh& mesh) {
  for (Eigen::Index k = 0; k < mesh.size(); ++k) {
    ASSERT_NEAR(mesh.normals.col(k).norm(), 1.0, 1e-9);
    ASSERT_GT(mesh.weights(k), 0.0);
    const Vector x = mesh.nodes.col(k);
    const Vector nu = mesh.normals.col(k);
    ASSERT_TRUE(contains(body, x - 1e-7 * nu)) << "node " << k;
    ASSERT_FALSE(contains(body, x + 1e-7 * nu)) << "node " << k;
  }
}

TEST(BoundaryQuadrature, Examples) {
  const auto disk = ConvexBody::ball(2, 1.0);
  const auto circle = boundary_quadrature(disk, 1000);
  EXPECT_NEAR(circle.total_weight() / (2 * pi), 1.0, 1e-3);
  expect_valid_mesh(disk, circle);

  const auto square = ConvexBody::cube(2, 1.0);
  const auto perimeter = boundary_quadrature(square, 400);
  EXPECT_NEAR(perimeter.total_weight(), 4.0, 4e-3);
  expect_valid_mesh(square, perimeter);

  const auto unit = boundary_quadrature(ConvexBody::interval(0.0, 1.0), 8);
  ASSERT_EQ(unit.size(), 2);
  EXPECT_NEAR(unit.nodes(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(unit.nodes(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(unit.weights(0), 1.0, 1e-15);
  EXPECT_NEAR(unit.weights(1), 1.0, 1e-15);
  EXPECT_NEAR(unit.normals(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(unit.normals(0, 1), 1.0, 1e-15);
}

TEST(BoundaryQuadrature, PolytopesMatchClosedFormAreas) {
  const auto diamond2 = ConvexBody::l1_ball(2, 1.0);
  EXPECT_NEAR(boundary_quadrature(diamond2, 16).total_weight(), surface_area(diamond2), 1e-12);
  expect_valid_mesh(diamond2, boundary_quadrature(diamond2, 16));
  const auto octahedron = ConvexBody::l1_ball(3, 1.0);
  const auto mesh = boundary_quadrature(octahedron, 8);
  EXPECT_NEAR(mesh.total_weight(), surface_area(octahedron), 1e-12);
  expect_valid_mesh(octahedron, mesh);

  std::vector<HalfSpace> rows;
  for (int i = 0; i < 3; ++i)
    for (double s : {1.0, -1.0}) {
      Vector a = Vector::Zero(3);
      a(i) = s;
      rows.push_back({a, 0.5});
    }
  const auto cube_h = ConvexBody::h_polytope(rows);
  EXPECT_NEAR(boundary_quadrature(cube_h, 8).total_weight(), 6.0, 1e-12);
  EXPECT_NEAR(boundary_quadrature(ConvexBody::cube(3, 1.0), 8).total_weight(), 6.0, 1e-12);
}

TEST(BoundaryQuadrature, AffineImageUsesAreaDistortion) {
  Matrix A(2, 2);
  A << 2.0, 0.0, 0.0, 1.0;
  const auto ellipse = apply_affine(ConvexBody::ball(2, 1.0), A, vec({0.5, 0.5}));
  const auto mesh = boundary_quadrature(ellipse, 4000);
  EXPECT_NEAR(mesh.total_weight(), 9.688448220547676, 1e-5);
  expect_valid_mesh(ellipse, mesh);
}

TEST(BoundaryQuadrature, ConvergesUnderRefinement) {
  const auto sphere = ConvexBody::ball(3, 1.0);
  const double area = 4.0 * pi;
  for (int res = 8; res <= 64; res *= 2) {
    const double e1 = std::abs(boundary_quadrature(sphere, res).total_weight() - area);
    const double e2 = std::abs(boundary_quadrature(sphere, 2 * res).total_weight() - area);
    EXPECT_GE(e1 / e2, 1.5) << "res " << res;
  }
  for (int res : {8, 16, 32})
    EXPECT_NEAR(boundary_quadrature(ConvexBody::cube(3, 1.0), res).total_weight(), 6.0, 1e-12);
}

TEST(BoundaryQuadrature, RejectsUnsupported) {
  EXPECT_THROW(boundary_quadrature(ConvexBody::ball(2, 1.0), 4), InvalidArgument);
  std::vector<HalfSpace> rows;
  for (int i = 0; i < 4; ++i)
    for (double s : {1.0, -1.0}) {
      Vector a = Vector::Zero(4);
      a(i) = s;
      rows.push_back({a, 1.0});
    }
  EXPECT_THROW(boundary_quadrature(ConvexBody::h_polytope(rows), 8), QuadratureUnsupported);
}

TEST(Fingerprint, DistinguishesBodies) {
  EXPECT_EQ(fingerprint(ConvexBody::ball(2, 1.0)), fingerprint(ConvexBody::ball(2, 1.0)));
  EXPECT_NE(fingerprint(ConvexBody::ball(2, 1.0)), fingerprint(ConvexBody::ball(2, 2.0)));
  EXPECT_NE(fingerprint(ConvexBody::ball(2, 1.0)), fingerprint(ConvexBody::cube(2, 1.0)));
}

}  // namespace
}  // namespace tci
