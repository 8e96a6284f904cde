#include "tci/sampling.hpp"

#include <cmath>
#include <string>

#include "tci/parallel.hpp"

namespace tci {

const char* to_string(SamplerKind kind) {
  return kind == SamplerKind::direct ? "direct" : "hit_and_run";
}

namespace {

// Stream id reserved for Markov chains, disjoint from per-point streams.
constexpr std::uint64_t kChainStream = 0x8000'0000'0000'0000ull;

bool has_direct_sampler(const ConvexBody& body) {
  switch (body.kind()) {
    case ConvexBody::Kind::h_polytope:
      return false;
    case ConvexBody::Kind::affine:
      return has_direct_sampler(body.base());
    default:
      return true;
  }
}

void draw_direct(const ConvexBody& body, RandomStream& rng, Eigen::Ref<Vector> out) {
  const int n = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::ball: {
      double norm2 = 0.0;
      do {
        for (int i = 0; i < n; ++i) out(i) = rng.normal();
        norm2 = out.squaredNorm();
      } while (norm2 == 0.0);
      const double radius = body.radius() * std::pow(rng.uniform(), 1.0 / n);
      out *= radius / std::sqrt(norm2);
      return;
    }
    case ConvexBody::Kind::cube:
      for (int i = 0; i < n; ++i) out(i) = body.side() * (rng.uniform() - 0.5);
      return;
    case ConvexBody::Kind::l1_ball: {
      double total = rng.exponential();
      for (int i = 0; i < n; ++i) {
        const double e = rng.exponential();
        total += e;
        out(i) = (rng.next_u64() & 1u) ? e : -e;
      }
      out *= body.radius() / total;
      return;
    }
    case ConvexBody::Kind::affine: {
      Vector base(n);
      draw_direct(body.base(), rng, base);
      out = body.linear() * base + body.shift();
      return;
    }
    case ConvexBody::Kind::h_polytope:
      break;
  }
  throw InvalidArgument("draw_direct: no exact sampler for this body");
}

// Spot-check containment on a 1% subsample; rounding at the boundary is
// forgiven by pulling the point 1e-12 towards the interior.
void spot_check(const ConvexBody& body, const Matrix& points) {
  const Vector& inner = body.interior_point();
  for (Eigen::Index k = 0; k < points.cols(); k += 100) {
    const Vector pulled = inner + (1.0 - 1e-12) * (points.col(k) - inner);
    if (!contains(body, pulled))
      throw NumericalError("sampler produced a point outside the body (index " +
                           std::to_string(k) + ")");
  }
}

}  // namespace

PointCloud sample_uniform(const ConvexBody& body, std::int64_t m, Seed seed) {
  if (m < 1) throw InvalidArgument("sample_uniform: m must be >= 1");
  if (!has_direct_sampler(body)) return hit_and_run(body, m, seed);
  PointCloud cloud;
  cloud.points.resize(body.dim(), m);
  parallel_for(m, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      RandomStream rng(seed, static_cast<std::uint64_t>(i));
      draw_direct(body, rng, cloud.points.col(i));
    }
  });
  spot_check(body, cloud.points);
  cloud.weights = Vector::Constant(m, 1.0 / static_cast<double>(m));
  cloud.seed = seed;
  cloud.body_fingerprint = fingerprint(body);
  cloud.sampler = SamplerKind::direct;
  return cloud;
}

PointCloud hit_and_run(const ConvexBody& body, std::int64_t m, Seed seed,
                       const HitAndRunOptions& options) {
  if (m < 1) throw InvalidArgument("hit_and_run: m must be >= 1");
  const int n = body.dim();
  const std::int64_t burn_in = options.burn_in < 0 ? 100 * n : options.burn_in;
  const std::int64_t thinning = options.thinning < 0 ? 10 * n : options.thinning;
  if (thinning < 1) throw InvalidArgument("hit_and_run: thinning must be >= 1");

  // Start: average of the boundary hits along +-e_i through the interior point.
  const Vector& center = body.interior_point();
  if (!contains(body, center))
    throw NumericalError("hit_and_run: could not find an interior starting point");
  Vector x = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    const auto [lo, hi] = chord(body, center, e);
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
      throw NumericalError("hit_and_run: degenerate coordinate chord at the start point");
    x += 2.0 * center;
    x(i) += lo + hi;
  }
  x /= static_cast<double>(2 * n);

  const auto [box_lo, box_hi] = bounding_box(body);
  const double zero_length = 1e-13 * (box_hi - box_lo).maxCoeff();

  RandomStream rng(seed, kChainStream);
  PointCloud cloud;
  cloud.points.resize(n, m);
  Vector d(n);
  int zero_streak = 0;
  auto step = [&] {
    for (;;) {
      for (int i = 0; i < n; ++i) d(i) = rng.normal();
      const double norm = d.norm();
      if (norm == 0.0) continue;
      d /= norm;
      const auto [lo, hi] = chord(body, x, d);
      if (!(hi - lo > zero_length)) {
        if (++zero_streak >= 100)
          throw NumericalError("hit_and_run: 100 consecutive zero-length chords");
        continue;
      }
      zero_streak = 0;
      x += rng.uniform(lo, hi) * d;
      return;
    }
  };
  for (std::int64_t s = 0; s < burn_in; ++s) step();
  for (std::int64_t k = 0; k < m; ++k) {
    if (k > 0)
      for (std::int64_t s = 0; s < thinning; ++s) step();
    cloud.points.col(k) = x;
  }
  spot_check(body, cloud.points);
  cloud.weights = Vector::Constant(m, 1.0 / static_cast<double>(m));
  cloud.seed = seed;
  cloud.body_fingerprint = fingerprint(body);
  cloud.sampler = SamplerKind::hit_and_run;
  return cloud;
}

Estimate mean_estimate(const Eigen::Ref<const Vector>& values, Seed seed) {
  const auto m = values.size();
  if (m < 1) throw InvalidArgument("mean_estimate: empty sample");
  const double mean = values.mean();
  double var = 0.0;
  if (m > 1) var = (values.array() - mean).square().sum() / static_cast<double>(m - 1);
  return {mean, std::sqrt(var / static_cast<double>(m)), m, seed};
}

Estimate estimate_mean_norm_p(const ConvexBody& body, double p, std::int64_t m, Seed seed) {
  if (!(p >= 1.0 && p <= 8.0)) throw InvalidArgument("estimate_mean_norm_p: p must be in [1, 8]");
  const PointCloud cloud = sample_uniform(body, m, seed);
  const Vector norms = cloud.points.colwise().norm().transpose();
  return mean_estimate(norms.array().pow(p).matrix(), seed);
}

}  // namespace tci
