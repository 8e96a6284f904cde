#pragma once

// Seeded uniform sampling from convex bodies. Exact i.i.d. samplers for the
// ball, cube and l1-ball (and their affine images); hit-and-run for
// H-polytopes.

#include <cstdint>

#include "tci/geometry.hpp"

namespace tci {

enum class SamplerKind { direct, hit_and_run };

const char* to_string(SamplerKind kind);

/// Weighted sample standing in for the uniform measure on a body.
struct PointCloud {
  Matrix points;   // dim x count, one column per point
  Vector weights;  // uniform 1/count
  Seed seed = 0;
  std::uint64_t body_fingerprint = 0;
  SamplerKind sampler = SamplerKind::direct;

  int dim() const { return static_cast<int>(points.rows()); }
  Eigen::Index size() const { return points.cols(); }
};

/// Exact samplers: ball via direction x radius^{1/n}, cube per coordinate,
/// l1-ball via normalised signed exponentials. H-polytopes fall back to
/// hit_and_run with default burn-in and thinning.
PointCloud sample_uniform(const ConvexBody& body, std::int64_t m, Seed seed);

struct HitAndRunOptions {
  std::int64_t burn_in = -1;   // < 0: 100 n
  std::int64_t thinning = -1;  // < 0: 10 n
};

/// Hit-and-run chain started at the average of the 2n coordinate-ray
/// boundary hits through the body's interior point. Returns the states at
/// steps burn_in, burn_in + thinning, ...
PointCloud hit_and_run(const ConvexBody& body, std::int64_t m, Seed seed,
                       const HitAndRunOptions& options = {});

/// Monte Carlo mean of |x|^p, p in [1, 8]. For hit-and-run clouds the
/// reported std_error ignores autocorrelation.
Estimate estimate_mean_norm_p(const ConvexBody& body, double p, std::int64_t m,
                              Seed seed);

/// Mean and standard error of a sample of i.i.d. values.
Estimate mean_estimate(const Eigen::Ref<const Vector>& values, Seed seed);

}  // namespace tci
