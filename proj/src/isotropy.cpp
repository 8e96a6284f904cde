#include "tci/isotropy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace tci {

namespace {

constexpr std::uint64_t kCheckCloud = 0x150;

bool is_centred_symmetric(const ConvexBody& b) {
  return b.kind() == ConvexBody::Kind::ball || b.kind() == ConvexBody::Kind::cube ||
         b.kind() == ConvexBody::Kind::l1_ball;
}

// Minkowski gauge of B at x (B must contain the origin in its interior).
double gauge(const ConvexBody& B, const Vector& x) {
  if (x.squaredNorm() == 0.0) return 0.0;
  const Vector origin = Vector::Zero(B.dim());
  return 1.0 / chord(B, origin, x).second;
}

// Inradius of a centred ball / cube / l1-ball.
double inradius(const ConvexBody& B) {
  switch (B.kind()) {
    case ConvexBody::Kind::ball:
      return B.radius();
    case ConvexBody::Kind::cube:
      return 0.5 * B.side();
    case ConvexBody::Kind::l1_ball:
      return B.radius() / std::sqrt(static_cast<double>(B.dim()));
    default:
      throw InvalidArgument("inradius: not a centred symmetric body");
  }
}

std::vector<Vector> cube_vertices(int n, double half) {
  std::vector<Vector> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = (mask >> i & 1u) ? half : -half;
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<Vector>> vertices_of(const ConvexBody& K) {
  const int n = K.dim();
  switch (K.kind()) {
    case ConvexBody::Kind::ball:
      return std::nullopt;
    case ConvexBody::Kind::cube:
      if (n > 16) return std::nullopt;
      return cube_vertices(n, 0.5 * K.side());
    case ConvexBody::Kind::l1_ball: {
      std::vector<Vector> out;
      for (int i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
          Vector v = Vector::Zero(n);
          v(i) = s * K.radius();
          out.push_back(std::move(v));
        }
      return out;
    }
    case ConvexBody::Kind::h_polytope:
      if (n > 3) return std::nullopt;
      return polytope_vertices(K);
    case ConvexBody::Kind::affine: {
      auto base = vertices_of(K.base());
      if (!base) return std::nullopt;
      for (auto& v : *base) v = K.linear() * v + K.shift();
      return base;
    }
  }
  return std::nullopt;
}

Matrix direction_net(int n, int count, Seed seed) {
  Matrix dirs(n, count);
  if (n == 1) {
    dirs.resize(1, 2);
    dirs << 1.0, -1.0;
    return dirs;
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      dirs(0, k) = std::cos(a);
      dirs(1, k) = std::sin(a);
    }
    return dirs;
  }
  for (int k = 0; k < count; ++k) {
    RandomStream rng(seed, static_cast<std::uint64_t>(k));
    Vector d(n);
    do {
      for (int i = 0; i < n; ++i) d(i) = rng.normal();
    } while (d.squaredNorm() == 0.0);
    dirs.col(k) = d.normalized();
  }
  return dirs;
}

double relative_error(const Estimate& e) {
  return e.value == 0.0 ? 0.0 : e.std_error / std::abs(e.value);
}

}  // namespace

std::pair<Vector, Matrix> covariance(const PointCloud& cloud) {
  const int n = cloud.dim();
  const auto m = cloud.size();
  if (m < n + 1) throw InvalidArgument("covariance: need at least n + 1 points");
  const Vector centroid = cloud.points.rowwise().mean();
  const Matrix centred = cloud.points.colwise() - centroid;
  const Matrix sigma = centred * centred.transpose() / static_cast<double>(m - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  if (!(hi > 0.0) || lo <= 1e-12 * hi)
    throw NumericalError("covariance: sample covariance is rank-deficient");
  return {centroid, sigma};
}

Matrix inverse_sqrt_spd(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  const Vector lam = eig.eigenvalues().cwiseMax(1e-12);
  return eig.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

IsotropyReport isotropic_position(const ConvexBody& body, std::int64_t m, Seed seed) {
  const int n = body.dim();
  const PointCloud cloud = sample_uniform(body, m, seed);
  auto [c, sigma] = covariance(cloud);

  const Matrix W = inverse_sqrt_spd(sigma);
  const double vol = volume(body).value;
  const double det_w = std::abs(W.determinant());
  const double s = std::pow(vol * det_w, -1.0 / n);

  IsotropyReport report;
  report.centroid = c;
  report.covariance = sigma;
  report.transform.linear = s * W;
  report.transform.shift = -(s * W) * c;

  const ConvexBody image = apply_affine(body, report.transform.linear, report.transform.shift);
  const PointCloud check = sample_uniform(image, m, derive_seed(seed, kCheckCloud));
  const auto [c2, sigma2] = covariance(check);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma2, Eigen::EigenvaluesOnly);
  report.isotropy_defect = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff() - 1.0;
  report.transformed_centroid = c2;

  // Volume of the image is 1 by construction, so the integrand is E|x|^2 / n.
  const Vector norm2 = check.points.colwise().squaredNorm().transpose();
  const Estimate mean2 = mean_estimate(norm2, seed);
  const double L = std::sqrt(mean2.value / n);
  report.L_estimate = {L, mean2.std_error / (2.0 * n * L), m, seed};
  return report;
}

Estimate isotropic_constant(const ConvexBody& body, std::int64_t m, Seed seed) {
  return isotropic_position(body, m, seed).L_estimate;
}

std::pair<double, bool> largest_concentric_scale(const ConvexBody& B, const ConvexBody& K,
                                                 int directions, Seed seed) {
  if (B.dim() != K.dim()) throw InvalidArgument("volume_ratio: dimension mismatch");
  const int n = B.dim();
  const Vector origin = Vector::Zero(n);
  if (!contains(B, origin) || !contains(K, origin))
    throw InvalidArgument("volume_ratio: concentric scaling needs both bodies to contain the origin");

  if (K.kind() == ConvexBody::Kind::ball && is_centred_symmetric(B))
    return {inradius(B) / K.radius(), true};

  // Symmetric B: a single vertex of a cube / l1-ball K is extremal.
  if (is_centred_symmetric(B) && K.kind() == ConvexBody::Kind::cube)
    return {1.0 / gauge(B, Vector::Constant(n, 0.5 * K.side())), true};
  if (is_centred_symmetric(B) && K.kind() == ConvexBody::Kind::l1_ball) {
    Vector v = Vector::Zero(n);
    v(0) = K.radius();
    return {1.0 / gauge(B, v), true};
  }

  if (const auto verts = vertices_of(K)) {
    double worst = 0.0;
    for (const auto& v : *verts) worst = std::max(worst, gauge(B, v));
    return {1.0 / worst, true};
  }

  if (directions < 1) throw InvalidArgument("volume_ratio: direction net must be non-empty");
  const Matrix dirs = direction_net(n, directions, seed);
  double t = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < dirs.cols(); ++k) {
    const Vector u = dirs.col(k);
    t = std::min(t, support(B, u) / support(K, u));
  }
  return {t, false};
}

VolumeRatioResult volume_ratio(const ConvexBody& B, const ConvexBody& K,
                               const VolumeRatioOptions& options) {
  const int n = B.dim();
  if (K.dim() != n) throw InvalidArgument("volume_ratio: dimension mismatch");
  const Estimate vb = volume(B);
  VolumeRatioResult out;
  if (options.mode == VolumeRatioMode::given_map) {
    if (options.map.linear.rows() != n || options.map.shift.size() != n)
      throw InvalidArgument("volume_ratio: map dimension mismatch");
    const ConvexBody image = apply_affine(K, options.map.linear, options.map.shift);
    check_containment(image, B, options.check_samples, options.seed);
    const Estimate vk = volume(image);
    const double r = std::pow(vb.value / vk.value, 1.0 / n);
    const double rel = std::hypot(relative_error(vb), relative_error(vk)) / n;
    out.ratio = {r, r * rel, std::max(vb.count, vk.count), 0};
    out.scale = 1.0;
    out.exact = false;
    return out;
  }
  const auto [t, exact] = largest_concentric_scale(B, K, options.directions, options.seed);
  const Estimate vk = volume(K);
  const double r = std::pow(vb.value / vk.value, 1.0 / n) / t;
  const double rel = std::hypot(relative_error(vb), relative_error(vk)) / n;
  out.ratio = {r, r * rel, std::max(vb.count, vk.count), 0};
  out.scale = t;
  out.exact = exact;
  return out;
}

void check_containment(const ConvexBody& K, const ConvexBody& B, std::int64_t samples,
                       Seed seed) {
  if (K.dim() != B.dim()) throw InvalidArgument("containment check: dimension mismatch");
  if (samples < 1) throw InvalidArgument("containment check: need at least one sample");
  const PointCloud cloud = sample_uniform(K, samples, seed);
  const Vector& inner = B.interior_point();
  for (Eigen::Index k = 0; k < cloud.size(); ++k) {
    const Vector x = cloud.points.col(k);
    // forgive last-bit rounding on a shared boundary
    const Vector pulled = inner + (1.0 - 1e-12) * (x - inner);
    if (!contains(B, pulled)) throw ContainmentError("K is not contained in B", x);
  }
}

double relative_entropy_uniform(const ConvexBody& K, const ConvexBody& B,
                                std::int64_t check_samples, Seed seed) {
  check_containment(K, B, check_samples, seed);
  return std::log(volume(B).value / volume(K).value);
}

Estimate relative_entropy_monte_carlo(const ConvexBody& K, const ConvexBody& B,
                                      std::int64_t m, Seed seed) {
  const PointCloud cloud = sample_uniform(B, m, seed);
  std::int64_t hits = 0;
  for (Eigen::Index k = 0; k < cloud.size(); ++k) hits += contains(K, cloud.points.col(k));
  if (hits == 0) throw NumericalError("relative entropy: no sample of B landed in K");
  const double p = static_cast<double>(hits) / static_cast<double>(m);
  return {-std::log(p), std::sqrt((1.0 - p) / (static_cast<double>(m) * p)), m, seed};
}

}  // namespace tci
