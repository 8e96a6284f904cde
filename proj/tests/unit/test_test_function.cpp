#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tci/test_function.hpp"

namespace tci {
namespace {

using std::numbers::pi;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST(TestFunction, ClosedFormValuesAndGradients) {
  const auto poly = TestFunction::polynomial(2, {{3.0, {2, 1}}, {1.0, {0, 0}}});
  EXPECT_DOUBLE_EQ(poly(vec({2.0, 0.5})), 7.0);
  EXPECT_TRUE(poly.gradient(vec({2.0, 0.5})).isApprox(vec({6.0, 12.0})));

  const auto trig = TestFunction::trigonometric(1, 1.0, {{{1}, 2.0, 0.0}});
  EXPECT_NEAR(trig(vec({1.0 / 3})), 2.0, 1e-15);
  EXPECT_NEAR(trig.gradient(vec({1.0 / 3}))(0), -pi * std::sqrt(3.0), 1e-14);

  const auto rad = TestFunction::radial(Vector::Zero(2), {1.0, 0.0, 1.0});
  EXPECT_NEAR(rad(vec({0.3, 0.4})), 1.25, 1e-15);
  EXPECT_TRUE(rad.gradient(vec({0.3, 0.4})).isApprox(vec({0.6, 0.8})));
  EXPECT_EQ(rad.gradient(Vector::Zero(2)).norm(), 0.0);

  const auto ex = TestFunction::exponential(vec({1.0, 2.0}), 0.5);
  EXPECT_NEAR(ex(vec({0.1, 0.2})), std::exp(1.0), 1e-15);
  EXPECT_TRUE(ex.gradient(vec({0.1, 0.2})).isApprox(std::exp(1.0) * vec({1.0, 2.0})));

  EXPECT_EQ(TestFunction::constant(3, 2.5)(vec({1, 2, 3})), 2.5);
  EXPECT_DOUBLE_EQ(TestFunction::linear(vec({1, -2}))(vec({3, 4})), -5.0);
}

TEST(TestFunction, UserGridInterpolates) {
  const auto line = TestFunction::user_grid(vec({0.0}), vec({2.0}), {3}, {0.0, 1.0, 4.0});
  EXPECT_FALSE(line.analytic_gradient());
  EXPECT_NEAR(line(vec({0.5})), 0.5, 1e-15);
  EXPECT_NEAR(line(vec({1.5})), 2.5, 1e-15);
  EXPECT_NEAR(line.gradient(vec({1.5}))(0), 3.0, 1e-6);

  std::vector<double> values;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) values.push_back(0.5 * i + 2.0 * 0.5 * j);
  const auto plane = TestFunction::user_grid(vec({0, 0}), vec({1, 1}), {3, 3}, values);
  EXPECT_NEAR(plane(vec({0.3, 0.7})), 1.7, 1e-14);
  EXPECT_TRUE(plane.gradient(vec({0.3, 0.7})).isApprox(vec({1.0, 2.0}), 1e-6));

  EXPECT_THROW(TestFunction::user_grid(vec({0}), vec({1}), {3}, {1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(TestFunction::user_grid(vec({0, 0, 0}), vec({1, 1, 1}), {2, 2, 2},
                                       std::vector<double>(8, 0.0)),
               InvalidArgument);
}

TEST(TestFunction, AmplitudeAndDilation) {
  const auto f = TestFunction::trigonometric(2, 0.3, {{{1, 2}, 0.7, -0.4}});
  const auto g = f.scaled(2.0, 3.0);
  const Vector x = vec({0.4, -1.1});
  EXPECT_NEAR(g(x), 2.0 * f(x / 3.0), 1e-15);
  EXPECT_TRUE(g.gradient(x).isApprox(2.0 / 3.0 * f.gradient(x / 3.0)));
  EXPECT_NEAR(g.scaled(0.5, 1.0 / 3)(x), f(x), 1e-15);
  EXPECT_THROW(f.scaled(1.0, 0.0), InvalidArgument);
  const auto h = f.shifted(1.5).scaled(2.0);
  EXPECT_NEAR(h(x), 2.0 * (f(x) + 1.5), 1e-14);
  EXPECT_TRUE(h.gradient(x).isApprox(2.0 * f.gradient(x)));
}

TEST(TestFunction, AnalyticGradientMatchesFiniteDifferences) {
  RandomStream rng(5, 0);
  const std::vector<TestFunction> fs = {
      TestFunction::polynomial(3, {{1.5, {1, 2, 0}}, {-0.5, {0, 1, 3}}, {2.0, {0, 0, 1}}}),
      TestFunction::random_trigonometric(2, 17, 3, false),
      TestFunction::random_trigonometric(3, 17, 4, true),
      TestFunction::radial(vec({0.1, -0.2}), {0.5, 1.0, -2.0, 0.3}),
      TestFunction::exponential(vec({0.3, -0.7, 1.1})),
      TestFunction::random_trigonometric(1, 9, 1, false).scaled(3.0, 0.5),
  };
  for (const auto& f : fs) {
    for (int k = 0; k < 100; ++k) {
      Vector x(f.dim());
      for (int i = 0; i < f.dim(); ++i) x(i) = rng.uniform(-1.0, 1.0);
      const Vector a = f.gradient(x);
      const Vector fd = finite_difference_gradient(f, x);
      ASSERT_LE((a - fd).norm(), 1e-6 * std::max(1.0, a.norm())) << k;
    }
  }
}

TEST(TestFunction, RandomTrigonometricFamily) {
  const auto a = TestFunction::random_trigonometric(2, 42, 7, true);
  const auto b = TestFunction::random_trigonometric(2, 42, 7, true);
  const auto c = TestFunction::random_trigonometric(2, 42, 8, true);
  const Vector x = vec({0.3, 0.9});
  EXPECT_EQ(a(x), b(x));
  EXPECT_NE(a(x), c(x));
  for (const auto& w : a.waves()) {
    int degree = 0;
    for (int k : w.frequency) degree += std::abs(k);
    EXPECT_GE(degree, 1);
    EXPECT_LE(degree, 4);
  }
  RandomStream rng(1, 0);
  for (int k = 0; k < 1000; ++k) {
    const Vector y = vec({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    ASSERT_GE(a(y), 0.5 - 1e-12);
  }
  EXPECT_THROW(a.monomials(), InvalidArgument);
}

}  // namespace
}  // namespace tci
