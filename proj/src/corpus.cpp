#include "tci/corpus.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

namespace tci {

std::pair<DiscreteMeasure, DiscreteMeasure> random_ot_instance(int points, int dim, Seed seed) {
  if (points < 1 || dim < 1) throw InvalidArgument("random_ot_instance: empty instance");
  RandomStream rng(seed, 0);
  Matrix x(dim, points), y(dim, points);
  for (int j = 0; j < points; ++j)
    for (int i = 0; i < dim; ++i) x(i, j) = rng.uniform();
  for (int j = 0; j < points; ++j)
    for (int i = 0; i < dim; ++i) y(i, j) = rng.uniform();
  return {DiscreteMeasure::uniform(std::move(x)), DiscreteMeasure::uniform(std::move(y))};
}

std::vector<NamedDomain> standard_domains() {
  Vector half(2);
  half << 0.5, 0.5;
  return {{"interval", ConvexBody::interval(0.0, 1.0)},
          {"square", translate(ConvexBody::cube(2, 1.0), half)},
          {"disk", ConvexBody::ball(2, 1.0)},
          {"l_shape", RectUnion::l_shape(1.0)}};
}

std::vector<NestedPair> nested_body_pairs() {
  std::vector<NestedPair> out;
  auto add = [&](std::string name, ConvexBody K, ConvexBody B) {
    out.push_back({std::move(name), std::move(K), std::move(B)});
  };
  for (int n = 2; n <= 4; ++n) {
    const std::string d = std::to_string(n);
    add("ball(0.8) in ball(1), n=" + d, ConvexBody::ball(n, 0.8), ConvexBody::ball(n, 1.0));
    add("cube(1) in cube(1.5), n=" + d, ConvexBody::cube(n, 1.0), ConvexBody::cube(n, 1.5));
    add("inscribed cube in ball, n=" + d, ConvexBody::cube(n, 2.0 / std::sqrt(n)), ConvexBody::ball(n, 1.0));
    add("l1 ball in cube, n=" + d, ConvexBody::l1_ball(n, 1.0), ConvexBody::cube(n, 2.0));
    add("l1 ball in ball, n=" + d, ConvexBody::l1_ball(n, 1.0), ConvexBody::ball(n, 1.0));
  }
  add("interval in interval", ConvexBody::interval(0.2, 0.7), ConvexBody::interval(0.0, 1.0));
  Vector shift(2);
  shift << 0.3, -0.2;
  add("shifted small disk in disk", translate(ConvexBody::ball(2, 0.5), shift), ConvexBody::ball(2, 1.0));
  Matrix A(2, 2);
  A << 1.0, 0.0, 0.0, 0.5;
  add("ellipse in disk", apply_affine(ConvexBody::ball(2, 1.0), A, Vector::Zero(2)), ConvexBody::ball(2, 1.0));
  const double c = std::cos(std::numbers::pi / 6), sn = std::sin(std::numbers::pi / 6);
  Matrix rot(2, 2);
  rot << c, -sn, sn, c;
  add("rotated square in disk", apply_affine(ConvexBody::cube(2, 1.0), rot, Vector::Zero(2)),
      ConvexBody::ball(2, 1.0));
  add("cube in l1 ball, n=3", ConvexBody::cube(3, 2.0 / 3.0), ConvexBody::l1_ball(3, 1.0));
  return out;
}

std::pair<Matrix, Vector> random_affine_map(int dim, Seed seed) {
  RandomStream rng(seed, 0);
  for (;;) {
    Matrix A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = rng.normal();
    const Eigen::JacobiSVD<Matrix> svd(A);
    const auto& sv = svd.singularValues();
    if (sv(dim - 1) > 0.0 && sv(0) / sv(dim - 1) <= 10.0) {
      Vector b(dim);
      for (int i = 0; i < dim; ++i) b(i) = rng.normal();
      return {A, b};
    }
  }
}

}  // namespace tci
