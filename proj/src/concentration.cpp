#include "tci/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "tci/isotropy.hpp"
#include "tci/sampling.hpp"
#include "tci/transport.hpp"

namespace tci {

LipschitzFunctional LipschitzFunctional::coordinate(int i) {
  if (i < 0) throw InvalidArgument("LipschitzFunctional: negative coordinate index");
  return {Kind::coordinate, i, {}};
}

LipschitzFunctional LipschitzFunctional::along(Vector u) {
  const double norm = u.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw InvalidArgument("LipschitzFunctional: direction must be a nonzero finite vector");
  return {Kind::direction, 0, u / norm};
}

LipschitzFunctional LipschitzFunctional::norm() { return {Kind::norm, 0, {}}; }

double LipschitzFunctional::operator()(const Eigen::Ref<const Vector>& x) const {
  switch (kind) {
    case Kind::coordinate:
      if (index >= x.size()) throw InvalidArgument("LipschitzFunctional: index out of range");
      return x(index);
    case Kind::direction:
      if (direction.size() != x.size())
        throw InvalidArgument("LipschitzFunctional: direction dimension mismatch");
      return direction.dot(x);
    case Kind::norm:
      return x.norm();
  }
  return 0.0;
}

std::string LipschitzFunctional::name() const {
  switch (kind) {
    case Kind::coordinate:
      return "x" + std::to_string(index + 1);
    case Kind::direction:
      return "direction";
    case Kind::norm:
      return "norm";
  }
  return "";
}

std::vector<double> default_t_grid(double max_deviation, int points) {
  if (points < 1) throw InvalidArgument("default_t_grid: need at least one point");
  if (!(max_deviation > 0.0) || !std::isfinite(max_deviation))
    throw InvalidArgument("default_t_grid: deviations are all zero");
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) t[static_cast<std::size_t>(k)] = max_deviation * (k + 1) / points;
  return t;
}

ConcentrationFit fit_concentration(const Vector& values, std::vector<double> t_grid, Seed seed) {
  const auto m = values.size();
  if (m < 10'000) throw InvalidArgument("concentration: need m >= 1e4 samples");
  ConcentrationFit fit;
  fit.m = m;
  fit.seed = seed;
  fit.mean = values.mean();

  std::vector<double> dev(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) dev[static_cast<std::size_t>(i)] = std::abs(values(i) - fit.mean);
  std::sort(dev.begin(), dev.end());

  if (t_grid.empty()) t_grid = default_t_grid(dev.back());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > 0.0) || !std::isfinite(t_grid[k]))
      throw InvalidArgument("concentration: t grid must be positive");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1]))
      throw InvalidArgument("concentration: t grid must be increasing");
  }
  fit.t_grid = std::move(t_grid);

  const double md = static_cast<double>(m);
  double envelope = 1.0;
  fit.alpha_hat = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fit.t_grid.size(); ++k) {
    const double t = fit.t_grid[k];
    const auto count = static_cast<std::int64_t>(dev.end() - std::lower_bound(dev.begin(), dev.end(), t));
    const double raw = static_cast<double>(count) / md;
    envelope = std::min(envelope, raw);
    fit.counts.push_back(count);
    fit.raw_tails.push_back(raw);
    fit.tails.push_back(envelope);
    if (count < kUsableTailCount) continue;
    fit.usable_points.push_back(static_cast<int>(k));
    const double tail = std::max(envelope, 1.0 / md);
    const double alpha = -std::log(tail / 2.0) / (t * t);
    if (alpha < fit.alpha_hat) {
      fit.alpha_hat = alpha;
      fit.argmin = static_cast<int>(k);
      fit.alpha_std_error = std::sqrt(tail * (1.0 - tail) / md) / (tail * t * t);
    }
  }
  if (fit.usable_points.empty())
    throw InvalidArgument("concentration: no t-grid point has " + std::to_string(kUsableTailCount) +
                          " exceedances; the grid is too coarse");
  return fit;
}

namespace {

Vector probe_values(const Matrix& points, const LipschitzFunctional& F) {
  Vector out(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) out(i) = F(points.col(i));
  return out;
}

}  // namespace

ConcentrationFit concentration_profile(const ConvexBody& body, const LipschitzFunctional& F,
                                       std::vector<double> t_grid, std::int64_t m, Seed seed) {
  if (m < 10'000) throw InvalidArgument("concentration_profile: need m >= 1e4 samples");
  const PointCloud cloud = sample_uniform(body, m, seed);
  return fit_concentration(probe_values(cloud.points, F), std::move(t_grid), seed);
}

Tau1Proxy tau1_proxy(const ConvexBody& body, std::int64_t m, Seed seed, const Tau1ProxyOptions& options) {
  const int n = body.dim();
  std::vector<LipschitzFunctional> probes;
  for (int i = 0; i < n; ++i) probes.push_back(LipschitzFunctional::coordinate(i));
  probes.push_back(LipschitzFunctional::norm());
  if (options.random_directions > 0) {
    RandomStream rng(derive_seed(seed, 0xD1), 0);
    for (int k = 0; k < options.random_directions; ++k) {
      Vector u(n);
      do {
        for (int i = 0; i < n; ++i) u(i) = rng.normal();
      } while (u.norm() == 0.0);
      probes.push_back(LipschitzFunctional::along(u));
    }
  }

  const PointCloud cloud = sample_uniform(body, m, seed);
  Tau1Proxy proxy;
  proxy.value.value = std::numeric_limits<double>::infinity();
  proxy.value.count = m;
  proxy.value.seed = seed;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const Vector values = probe_values(cloud.points, probes[k]);
    std::vector<double> grid;
    const double spread = (values.array() - values.mean()).abs().maxCoeff();
    if (spread > 0.0) grid = default_t_grid(spread, options.grid_points);
    const ConcentrationFit fit = fit_concentration(values, std::move(grid), seed);
    proxy.probes.push_back(probes[k].name());
    proxy.alphas.push_back(fit.alpha_hat);
    if (fit.alpha_hat < proxy.value.value) {
      proxy.value.value = fit.alpha_hat;
      proxy.value.std_error = fit.alpha_std_error;
      proxy.argmin = static_cast<int>(k);
    }
  }
  return proxy;
}

namespace {

// |x| and |x|^2 on one sample of the body.
std::pair<Estimate, Estimate> norm_moments(const ConvexBody& body, std::int64_t m, Seed seed) {
  const PointCloud cloud = sample_uniform(body, m, seed);
  const Vector norms = cloud.points.colwise().norm().transpose();
  return {mean_estimate(norms, seed), mean_estimate(norms.array().square().matrix(), seed)};
}

void require_isotropic(const ConvexBody& B, const Lemma1Options& options, Seed seed) {
  const Estimate vol = volume(B);
  if (std::abs(vol.value - 1.0) > 1e-9 + 3.0 * vol.std_error)
    throw InvalidArgument("lemma1_audit: B must have volume one (|B| = " +
                          std::to_string(vol.value) + ")");
  const PointCloud cloud = sample_uniform(B, options.moment_samples, seed);
  const auto [centroid, sigma] = covariance(cloud);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  const double lmin = eig.eigenvalues().minCoeff(), lmax = eig.eigenvalues().maxCoeff();
  const double defect = lmax / lmin - 1.0;
  if (defect > options.isotropy_tolerance)
    throw InvalidArgument("lemma1_audit: B is not isotropic (defect " + std::to_string(defect) + ")");
  if (centroid.norm() > options.isotropy_tolerance * std::sqrt(lmax))
    throw InvalidArgument("lemma1_audit: B is not centred at the origin");
}

}  // namespace

Lemma1Audit lemma1_audit(const ConvexBody& K, const ConvexBody& B, Seed seed,
                         const Lemma1Options& options) {
  if (K.dim() != B.dim()) throw InvalidArgument("lemma1_audit: dimension mismatch");
  const int n = B.dim();
  Lemma1Audit a;
  a.dim = n;

  require_isotropic(B, options, derive_seed(seed, 0x11));
  check_containment(K, B, options.containment_samples, derive_seed(seed, 0x12));

  const double volK = volume(K).value, volB = volume(B).value;
  a.v = std::pow(volB / volK, 1.0 / n);
  a.entropy = relative_entropy_uniform(K, B, options.containment_samples, derive_seed(seed, 0x13));

  const Tau1Proxy tau = tau1_proxy(B, options.tau_samples, derive_seed(seed, 0x14));
  a.tau_proxy = tau.value;

  const auto [k1, k2] = norm_moments(K, options.moment_samples, derive_seed(seed, 0x15));
  const auto [b1, b2] = norm_moments(B, options.moment_samples, derive_seed(seed, 0x16));
  a.mean_norm_K = k1;
  a.mean_norm_B = b1;

  // Identical bodies carry identical measures; skip the sampling bias.
  if (fingerprint(K) == fingerprint(B))
    a.w1_KB = Estimate::exact(0.0);
  else
    a.w1_KB = wasserstein_empirical(K, B, 1.0, options.ot_samples, derive_seed(seed, 0x17));

  a.sqrt_term = std::sqrt(2.0 * a.entropy / a.tau_proxy.value);
  a.second_moment_B = {std::sqrt(b2.value), b2.std_error / (2.0 * std::sqrt(b2.value)), b2.count,
                       b2.seed};
  a.L_B = {std::sqrt(b2.value / n), a.second_moment_B.std_error / std::sqrt(n), b2.count, b2.seed};
  a.sqrt_n_LB = std::sqrt(n) * a.L_B.value;
  a.borell_ratio = std::sqrt(k2.value) / k1.value;
  a.tau_upper = a.entropy > 1e-12 ? a.w1_KB.value * a.w1_KB.value / (2.0 * a.entropy)
                                  : std::numeric_limits<double>::infinity();

  a.L_K = isotropic_constant(K, options.moment_samples, derive_seed(seed, 0x18));
  const double logv = std::max(0.0, std::log(a.v));
  a.bound_shape = (1.0 + std::sqrt(logv)) * a.v / std::sqrt(a.tau_proxy.value);
  a.c_implied = a.L_K.value / a.bound_shape;

  auto add = [&](std::string name, double lhs, double rhs, double se, bool asserted) {
    ProofStep s{std::move(name), lhs, rhs, se, asserted, true};
    if (asserted) s.pass = lhs <= rhs + options.sigmas * se;
    a.pass = a.pass && s.pass;
    a.steps.push_back(std::move(s));
  };
  add("triangle W1(mK,d0) <= W1(mK,mB) + W1(mB,d0)", k1.value, a.w1_KB.value + b1.value,
      std::hypot(k1.std_error, a.w1_KB.std_error, b1.std_error), true);
  add("transport W1(mK,mB) vs sqrt(2H/tau)", a.w1_KB.value, a.sqrt_term, a.w1_KB.std_error, false);
  add("cauchy-schwarz int_B|x| <= (int_B|x|^2)^(1/2)", b1.value, a.second_moment_B.value,
      std::hypot(b1.std_error, a.second_moment_B.std_error), true);
  add("entropy H(mK|mB) = n log v", a.entropy, n * std::log(a.v), 0.0, false);
  add("moment (int_B|x|^2)^(1/2) = sqrt(n) L_B", a.second_moment_B.value, a.sqrt_n_LB,
      a.second_moment_B.std_error, false);
  add("borell (avg_K|x|^2)^(1/2) / avg_K|x|", std::sqrt(k2.value), k1.value, k1.std_error, false);
  add("final L_K vs (1+sqrt(log v)) v tau^(-1/2)", a.L_K.value, a.bound_shape, a.L_K.std_error, false);
  return a;
}

}  // namespace tci
