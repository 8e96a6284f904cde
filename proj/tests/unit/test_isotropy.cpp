#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "tci/isotropy.hpp"

namespace tci {
namespace {

using std::numbers::pi;

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix random_invertible(int n, RandomStream& rng) {
  for (;;) {
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
    Eigen::JacobiSVD<Matrix> svd(A);
    const auto& s = svd.singularValues();
    if (s(n - 1) > 0.2 * s(0)) return A;
  }
}

TEST(Covariance, CubeIsMultipleOfIdentity) {
  const auto cloud = sample_uniform(ConvexBody::cube(2, 1.0), 100000, 11);
  const auto [c, sigma] = covariance(cloud);
  // std error of a variance entry: sqrt(Var(x^2)/m), Var(x^2) = 1/80 - 1/144
  const double se = std::sqrt(1.0 / 80 - 1.0 / 144) / std::sqrt(1e5);
  EXPECT_NEAR(sigma(0, 0), 1.0 / 12, 3 * se);
  EXPECT_NEAR(sigma(1, 1), 1.0 / 12, 3 * se);
  EXPECT_NEAR(sigma(0, 1), 0.0, 3 * (1.0 / 12) / std::sqrt(1e5));
  EXPECT_LT(c.norm(), 4 * std::sqrt(2.0 / 12 / 1e5));
}

TEST(Covariance, VolumeOneDisk) {
  const auto disk = ConvexBody::ball(2, 1.0 / std::sqrt(pi));
  const auto [c, sigma] = covariance(sample_uniform(disk, 200000, 12));
  EXPECT_NEAR(sigma(0, 0) * 4 * pi, 1.0, 0.01);
  EXPECT_NEAR(sigma(1, 1) * 4 * pi, 1.0, 0.01);
}

TEST(Covariance, DegenerateClouds) {
  PointCloud repeated;
  repeated.points = Matrix::Constant(2, 50, 0.3);
  EXPECT_THROW(covariance(repeated), NumericalError);
  PointCloud tiny;
  tiny.points = Matrix::Random(3, 3);
  EXPECT_THROW(covariance(tiny), InvalidArgument);
}

TEST(InverseSqrt, MatchesDiagonalAndFloorsEigenvalues) {
  const Matrix w = inverse_sqrt_spd(diag2(4.0, 0.25));
  EXPECT_NEAR(w(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(w(1, 1), 2.0, 1e-14);
  const Matrix floored = inverse_sqrt_spd(diag2(1.0, 0.0));
  EXPECT_NEAR(floored(1, 1), 1e6, 1e-3);
}

TEST(IsotropicPosition, CubeIsAlreadyIsotropic) {
  const auto rep = isotropic_position(ConvexBody::cube(2, 1.0), 100000, 3);
  EXPECT_LE(rep.isotropy_defect, 0.05);
  EXPECT_LT((rep.transform.linear - Matrix::Identity(2, 2)).norm(), 0.03);
  EXPECT_LT(rep.transform.shift.norm(), 0.01);
  EXPECT_NEAR(std::abs(rep.transform.linear.determinant()), 1.0, 1e-12);
}

TEST(IsotropicPosition, RecoversStretch) {
  const auto ellipse = apply_affine(ConvexBody::ball(2, 1.0), diag2(2.0, 0.5), Vector::Zero(2));
  const auto rep = isotropic_position(ellipse, 100000, 4);
  // transform * stretch must be a multiple of an orthogonal map
  const Matrix composite = rep.transform.linear * diag2(2.0, 0.5);
  Eigen::JacobiSVD<Matrix> svd(composite);
  EXPECT_NEAR(svd.singularValues()(0) / svd.singularValues()(1), 1.0, 0.02);
  Eigen::JacobiSVD<Matrix> w(rep.transform.linear);
  EXPECT_NEAR(w.singularValues()(0) / w.singularValues()(1), 4.0, 0.08);
  EXPECT_LE(rep.isotropy_defect, 0.05);
}

TEST(IsotropicPosition, IntervalConstant) {
  const auto rep = isotropic_position(ConvexBody::interval(2.0, 5.0), 100000, 5);
  EXPECT_NEAR(rep.L_estimate.value * std::sqrt(12.0), 1.0, 0.01);
  EXPECT_EQ(rep.isotropy_defect, 0.0);
}

TEST(IsotropicPosition, TransformedCentroidIsSmall) {
  const auto body = apply_affine(ConvexBody::l1_ball(3, 1.0),
                                 Matrix::Identity(3, 3) * 1.7, Vector::Constant(3, 4.0));
  const auto rep = isotropic_position(body, 100000, 6);
  // per-coordinate sd of an isotropic body is L, so 4 sigma is 4 L / sqrt(m)
  EXPECT_LT(rep.transformed_centroid.norm(),
            4 * std::sqrt(3.0) * rep.L_estimate.value / std::sqrt(1e5));
  EXPECT_NEAR(rep.centroid(0), 4.0, 0.01);
}

TEST(IsotropicPosition, IdempotentUpToRotation) {
  RandomStream rng(9, 0);
  const auto body =
      apply_affine(ConvexBody::cube(3, 1.0), random_invertible(3, rng), Vector::Constant(3, 0.5));
  const auto first = isotropic_position(body, 50000, 21);
  const auto image = apply_affine(body, first.transform.linear, first.transform.shift);
  const auto second = isotropic_position(image, 50000, 21);
  const Matrix Q = second.transform.linear;
  EXPECT_LT((Q.transpose() * Q - Matrix::Identity(3, 3)).norm(), 0.05);
  EXPECT_LT(std::abs(second.L_estimate.value - first.L_estimate.value),
            first.L_estimate.std_error);
}

TEST(IsotropicConstant, CubesAndDisk) {
  for (int n = 2; n <= 6; ++n) {
    const auto L = isotropic_constant(ConvexBody::cube(n, 1.0), 200000, 100 + n);
    EXPECT_NEAR(L.value * std::sqrt(12.0), 1.0, 0.01) << n;
  }
  const auto disk = isotropic_constant(ConvexBody::ball(2, 1.0), 200000, 7);
  EXPECT_NEAR(disk.value / (1.0 / (2 * std::sqrt(pi))), 1.0, 0.01);
}

// Closed form L for the ball: omega_n^{-1/n} / sqrt(n + 2).
TEST(IsotropicConstant, BallClosedForm) {
  for (int n : {3, 5}) {
    const auto L = isotropic_constant(ConvexBody::ball(n, 2.0), 100000, 8);
    const double truth = std::pow(unit_ball_volume(n), -1.0 / n) / std::sqrt(n + 2.0);
    EXPECT_NEAR(L.value, truth, 4 * L.std_error + 0.003 * truth) << n;
  }
}

TEST(IsotropicConstant, AffineInvariant) {
  RandomStream rng(77, 0);
  const auto base = ConvexBody::l1_ball(3, 1.0);
  const auto L0 = isotropic_constant(base, 50000, 1);
  int ok = 0;
  for (int k = 0; k < 20; ++k) {
    Vector shift(3);
    for (int i = 0; i < 3; ++i) shift(i) = rng.normal();
    const auto body = apply_affine(base, random_invertible(3, rng), shift);
    const auto L = isotropic_constant(body, 50000, 1000 + k);
    const double combined = std::hypot(L.std_error, L0.std_error);
    ok += std::abs(L.value - L0.value) <= 3 * combined;
  }
  EXPECT_GE(ok, 19);
}

TEST(VolumeRatio, ClosedFormPairs) {
  const auto disk = ConvexBody::ball(2, 1.0);
  const auto same = volume_ratio(disk, disk);
  EXPECT_NEAR(same.ratio.value, 1.0, 1e-12);
  EXPECT_TRUE(same.exact);

  const auto diamond = volume_ratio(disk, ConvexBody::l1_ball(2, 1.0));
  EXPECT_NEAR(diamond.scale, 1.0, 1e-12);
  EXPECT_NEAR(diamond.ratio.value, std::sqrt(pi / 2), 1e-12);

  const auto inscribed = volume_ratio(ConvexBody::cube(2, 1.0), ConvexBody::ball(2, 1.0));
  EXPECT_NEAR(inscribed.scale, 0.5, 1e-12);
  EXPECT_NEAR(inscribed.ratio.value, 2.0 / std::sqrt(pi), 1e-12);

  const auto cube_in_l1 = volume_ratio(ConvexBody::l1_ball(3, 1.0), ConvexBody::cube(3, 1.0));
  EXPECT_NEAR(cube_in_l1.scale, 2.0 / 3.0, 1e-12);
}

TEST(VolumeRatio, DirectionNetIsUpperBoundOnScale) {
  // Ellipse inside a disk: exact t = 1 / (largest semi-axis).
  const auto ellipse = apply_affine(ConvexBody::ball(2, 1.0), diag2(2.0, 0.5), Vector::Zero(2));
  const auto [t, exact] = largest_concentric_scale(ConvexBody::ball(2, 1.0), ellipse);
  EXPECT_FALSE(exact);
  EXPECT_GE(t, 0.5 - 1e-12);
  EXPECT_NEAR(t, 0.5, 1e-6);
  // Rotated square uses its vertices.
  Matrix R(2, 2);
  R << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
  const auto rotated = apply_affine(ConvexBody::cube(2, 1.0), R, Vector::Zero(2));
  const auto [t2, exact2] = largest_concentric_scale(ConvexBody::ball(2, 1.0), rotated);
  EXPECT_TRUE(exact2);
  EXPECT_NEAR(t2, std::sqrt(2.0), 1e-12);
}

TEST(VolumeRatio, GivenMap) {
  VolumeRatioOptions opt;
  opt.mode = VolumeRatioMode::given_map;
  opt.map = {Matrix::Identity(2, 2) * 0.5, Vector::Zero(2)};
  const auto r = volume_ratio(ConvexBody::ball(2, 1.0), ConvexBody::ball(2, 1.0), opt);
  EXPECT_NEAR(r.ratio.value, 2.0, 1e-12);

  opt.map = {Matrix::Identity(2, 2), Vector::Constant(2, 0.5)};
  try {
    volume_ratio(ConvexBody::ball(2, 1.0), ConvexBody::ball(2, 1.0), opt);
    FAIL() << "expected a containment error";
  } catch (const ContainmentError& e) {
    EXPECT_FALSE(contains(ConvexBody::ball(2, 1.0), e.witness()));
  }
}

TEST(RelativeEntropy, Examples) {
  const auto B = ConvexBody::ball(2, 1.0);
  EXPECT_NEAR(relative_entropy_uniform(B, B), 0.0, 1e-15);
  EXPECT_NEAR(relative_entropy_uniform(ConvexBody::ball(2, 0.5), B), std::log(4.0), 1e-12);
  // |B| = 1, |K| = v^{-n}  ->  n log v
  const double v = 1.3;
  const auto cube = ConvexBody::cube(3, 1.0);
  EXPECT_NEAR(relative_entropy_uniform(ConvexBody::cube(3, 1.0 / v), cube), 3 * std::log(v),
              1e-12);
  EXPECT_THROW(relative_entropy_uniform(ConvexBody::ball(2, 1.1), B), ContainmentError);
}

TEST(RelativeEntropy, MonteCarloAgrees) {
  const auto B = ConvexBody::cube(2, 2.0);
  const auto K = translate(ConvexBody::ball(2, 0.6), Vector::Constant(2, 0.2));
  const double exact = relative_entropy_uniform(K, B);
  const auto mc = relative_entropy_monte_carlo(K, B, 200000, 3);
  EXPECT_NEAR(mc.value, exact, 3 * mc.std_error);
}

}  // namespace
}  // namespace tci
