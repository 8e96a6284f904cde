#pragma once

// Isotropic position, isotropic constants, volume ratios and the relative
// entropy of nested uniform measures.

#include <utility>

#include "tci/sampling.hpp"

namespace tci {

struct AffineMap {
  Matrix linear;
  Vector shift;

  Vector operator()(const Eigen::Ref<const Vector>& x) const { return linear * x + shift; }
  static AffineMap identity(int n) { return {Matrix::Identity(n, n), Vector::Zero(n)}; }
};

struct IsotropyReport {
  Vector centroid;     // of the input body
  Matrix covariance;   // of the input body
  AffineMap transform; // x -> s W (x - centroid), W = covariance^{-1/2}
  Estimate L_estimate; // sqrt(E|x|^2 / n) on a fresh sample of transform(body)
  double isotropy_defect = 0.0;  // lambda_max / lambda_min - 1 after the transform
  Vector transformed_centroid;
};

/// Sample centroid and centred covariance (divisor m - 1). Needs at least
/// n + 1 points; throws NumericalError for rank-deficient clouds.
std::pair<Vector, Matrix> covariance(const PointCloud& cloud);

/// Symmetric inverse square root with eigenvalues floored at 1e-12.
Matrix inverse_sqrt_spd(const Matrix& sigma);

IsotropyReport isotropic_position(const ConvexBody& body, std::int64_t m, Seed seed);

/// L_K = min_T (1/(n |TK|^{1+2/n}) int_{TK} |x|^2)^{1/2}, evaluated at the
/// isotropic T.
Estimate isotropic_constant(const ConvexBody& body, std::int64_t m, Seed seed);

enum class VolumeRatioMode { concentric_scaling, given_map };

struct VolumeRatioOptions {
  VolumeRatioMode mode = VolumeRatioMode::concentric_scaling;
  AffineMap map;                 // given_map only
  std::int64_t check_samples = 10'000;
  int directions = 20'000;       // direction net when no closed form applies
  Seed seed = 0xB0D1;
};

struct VolumeRatioResult {
  Estimate ratio;    // (|B| / |tK|)^{1/n}
  double scale = 1;  // t (concentric) or 1 (given map)
  bool exact = false;
};

/// concentric_scaling: largest t with tK ⊆ B, exact when K is a ball, cube
/// or l1-ball or a polytope with enumerable vertices, otherwise an upper
/// bound from a direction net. given_map: containment of T(K) in B checked
/// on sample points (throws ContainmentError with the witness).
VolumeRatioResult volume_ratio(const ConvexBody& B, const ConvexBody& K,
                               const VolumeRatioOptions& options = {});

/// Largest t with tK ⊆ B (same rules as volume_ratio).
std::pair<double, bool> largest_concentric_scale(const ConvexBody& B, const ConvexBody& K,
                                                 int directions = 20'000, Seed seed = 0xB0D1);

/// H(m_K | m_B) = log(|B|/|K|), after checking K ⊆ B on `check_samples`
/// points of K.
double relative_entropy_uniform(const ConvexBody& K, const ConvexBody& B,
                                std::int64_t check_samples = 10'000, Seed seed = 0xE17);

/// Independent Monte Carlo estimate of the same quantity: -log of the
/// fraction of uniform points of B that land in K (delta-method error).
Estimate relative_entropy_monte_carlo(const ConvexBody& K, const ConvexBody& B,
                                      std::int64_t m, Seed seed);

/// Throws ContainmentError on the first sampled point of K outside B.
void check_containment(const ConvexBody& K, const ConvexBody& B, std::int64_t samples,
                       Seed seed);

}  // namespace tci
