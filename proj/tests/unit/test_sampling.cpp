#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "tci/sampling.hpp"

namespace tci {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

ConvexBody cube_polytope(int n, double half) {
  std::vector<HalfSpace> rows;
  for (int i = 0; i < n; ++i)
    for (double s : {1.0, -1.0}) {
      Vector a = Vector::Zero(n);
      a(i) = s;
      rows.push_back({a, half});
    }
  return ConvexBody::h_polytope(rows);
}

struct Moments {
  Estimate coord_mean, coord_var, mean_norm, mean_norm2;
};

// Sample moments of coordinate 0 and of |x|, with i.i.d. standard errors.
Moments moments(const PointCloud& cloud) {
  const Vector x0 = cloud.points.row(0).transpose();
  const Vector norms = cloud.points.colwise().norm().transpose();
  Moments out;
  out.coord_mean = mean_estimate(x0, cloud.seed);
  out.coord_var = mean_estimate((x0.array() - 0.0).square().matrix(), cloud.seed);
  out.mean_norm = mean_estimate(norms, cloud.seed);
  out.mean_norm2 = mean_estimate(norms.array().square().matrix(), cloud.seed);
  return out;
}

bool within(const Estimate& e, double truth, double sigmas) {
  return std::abs(e.value - truth) <= sigmas * e.std_error;
}

TEST(SampleUniform, ExampleMoments) {
  const auto cube = sample_uniform(ConvexBody::cube(2, 1.0), 100000, 1);
  const Estimate mean = mean_estimate(cube.points.row(0).transpose(), 1);
  EXPECT_NEAR(mean.value, 0.0, 3.0 * std::sqrt(1.0 / 12.0) / std::sqrt(1e5));

  const auto disk = sample_uniform(ConvexBody::ball(2, 1.0), 100000, 2);
  const Estimate r = mean_estimate(disk.points.colwise().norm().transpose(), 2);
  EXPECT_TRUE(within(r, 2.0 / 3.0, 3.0)) << r.value << " +- " << r.std_error;
}

TEST(SampleUniform, DeterministicPerSeed) {
  for (const auto& body : {ConvexBody::ball(3, 1.0), ConvexBody::l1_ball(4, 2.0),
                           cube_polytope(2, 0.5)}) {
    const auto a = sample_uniform(body, 1, 99);
    const auto b = sample_uniform(body, 1, 99);
    EXPECT_EQ(a.points, b.points);
    const auto c = sample_uniform(body, 500, 7);
    const auto d = sample_uniform(body, 500, 7);
    EXPECT_EQ(c.points, d.points);
    EXPECT_EQ(c.body_fingerprint, fingerprint(body));
  }
}

TEST(SampleUniform, RejectsEmptyRequests) {
  EXPECT_THROW(sample_uniform(ConvexBody::ball(2, 1.0), 0, 1), InvalidArgument);
  EXPECT_THROW(ConvexBody::ball(2, 0.0), InvalidArgument);
}

TEST(SampleUniform, PointsLieInBodyAndWeightsAreUniform) {
  Matrix A(2, 2);
  A << 1.0, 0.4, -0.3, 2.0;
  const auto body = apply_affine(ConvexBody::l1_ball(2, 1.0), A, vec({1.0, 2.0}));
  const auto cloud = sample_uniform(body, 5000, 3);
  EXPECT_EQ(cloud.sampler, SamplerKind::direct);
  for (Eigen::Index k = 0; k < cloud.size(); ++k) ASSERT_TRUE(contains(body, cloud.points.col(k)));
  EXPECT_NEAR(cloud.weights.sum(), 1.0, 1e-12);
}

// Closed-form moments hold within 4 standard errors in >= 99% of 200 seeds.
TEST(SampleUniform, DirectSamplerMomentsAcrossSeeds) {
  struct Case {
    ConvexBody body;
    double var, mean_norm, mean_norm2;  // mean_norm < 0: no closed form
  };
  const int n = 3;
  const double l1_var = 2.0 / ((n + 1.0) * (n + 2.0));
  const std::vector<Case> cases = {
      {ConvexBody::ball(n, 1.0), 1.0 / (n + 2), n / (n + 1.0), n / (n + 2.0)},
      {ConvexBody::cube(n, 1.0), 1.0 / 12, -1.0, n / 12.0},
      {ConvexBody::cube(2, 1.0), 1.0 / 12, 0.3825978053687676, 2.0 / 12.0},
      {ConvexBody::cube(1, 1.0), 1.0 / 12, 0.25, 1.0 / 12.0},
      {ConvexBody::l1_ball(n, 1.0), l1_var, -1.0, n * l1_var},
  };
  for (const auto& c : cases) {
    int ok_mean = 0, ok_var = 0, ok_norm = 0, ok_norm2 = 0;
    for (Seed seed = 0; seed < 200; ++seed) {
      const auto m = moments(sample_uniform(c.body, 2000, seed));
      ok_mean += within(m.coord_mean, 0.0, 4.0);
      ok_var += within(m.coord_var, c.var, 4.0);
      ok_norm += c.mean_norm < 0 || within(m.mean_norm, c.mean_norm, 4.0);
      ok_norm2 += within(m.mean_norm2, c.mean_norm2, 4.0);
    }
    EXPECT_GE(ok_mean, 198);
    EXPECT_GE(ok_var, 198);
    EXPECT_GE(ok_norm, 198);
    EXPECT_GE(ok_norm2, 198);
  }
}

TEST(HitAndRun, SquareMatchesDirectCubeMoments) {
  const auto chain = hit_and_run(cube_polytope(2, 0.5), 100000, 5);
  EXPECT_EQ(chain.sampler, SamplerKind::hit_and_run);
  const auto direct = sample_uniform(ConvexBody::cube(2, 1.0), 100000, 5);
  const auto a = moments(chain);
  const auto b = moments(direct);
  const double sd = std::sqrt(1.0 / 12.0);
  EXPECT_NEAR(a.coord_mean.value, b.coord_mean.value, 0.05 * sd);
  EXPECT_NEAR(a.coord_var.value / (1.0 / 12.0), 1.0, 0.05);
  EXPECT_NEAR(a.coord_var.value / b.coord_var.value, 1.0, 0.05);
  EXPECT_NEAR(a.mean_norm.value / b.mean_norm.value, 1.0, 0.05);
  EXPECT_NEAR(a.mean_norm2.value / b.mean_norm2.value, 1.0, 0.05);
}

TEST(HitAndRun, TriangleCentroid) {
  const auto simplex = ConvexBody::h_polytope(
      {{vec({-1, 0}), 0.0}, {vec({0, -1}), 0.0}, {vec({1, 1}), 1.0}});
  const auto cloud = sample_uniform(simplex, 100000, 8);
  const Vector mean = cloud.points.rowwise().mean();
  EXPECT_NEAR(mean(0) / (1.0 / 3.0), 1.0, 0.05);
  EXPECT_NEAR(mean(1) / (1.0 / 3.0), 1.0, 0.05);
}

TEST(HitAndRun, ZeroBurnInReturnsStartPoint) {
  const auto cloud = hit_and_run(cube_polytope(3, 0.5), 1, 4, {0, 1});
  EXPECT_NEAR(cloud.points.col(0).norm(), 0.0, 1e-12);
}

TEST(HitAndRun, WorksOnNonPolytopeBodies) {
  const auto cloud = hit_and_run(ConvexBody::l1_ball(3, 1.0), 20000, 6);
  const Vector norms = cloud.points.colwise().lpNorm<1>().transpose();
  EXPECT_LE(norms.maxCoeff(), 1.0 + 1e-12);
  // E|x|_1 over the unit l1-ball in R^3 is n/(n+1) = 3/4.
  EXPECT_NEAR(norms.mean(), 0.75, 0.02);
}

TEST(EstimateMeanNormP, Examples) {
  const auto cube = estimate_mean_norm_p(ConvexBody::cube(1, 1.0), 2.0, 100000, 1);
  EXPECT_TRUE(within(cube, 1.0 / 12.0, 3.0)) << cube.value;
  const auto disk = estimate_mean_norm_p(ConvexBody::ball(2, 1.0), 2.0, 100000, 2);
  EXPECT_TRUE(within(disk, 0.5, 3.0)) << disk.value;
  EXPECT_THROW(estimate_mean_norm_p(ConvexBody::ball(2, 1.0), 0.5, 10, 1), InvalidArgument);
  EXPECT_THROW(estimate_mean_norm_p(ConvexBody::ball(2, 1.0), 9.0, 10, 1), InvalidArgument);
}

}  // namespace
}  // namespace tci
