#pragma once

// Normal-concentration profiles of 1-Lipschitz functionals under the uniform
// measure of a body, a tau_1 proxy built from them, and an audit of the
// transport-entropy argument bounding L_K through tau_1(B).

#include <string>
#include <vector>

#include "tci/geometry.hpp"

namespace tci {

/// 1-Lipschitz probe: x_i, <u, x> with |u| = 1, or |x|.
struct LipschitzFunctional {
  enum class Kind { coordinate, direction, norm };
  Kind kind = Kind::coordinate;
  int index = 0;
  Vector direction;

  static LipschitzFunctional coordinate(int i);
  static LipschitzFunctional along(Vector u);  // normalised internally
  static LipschitzFunctional norm();

  double operator()(const Eigen::Ref<const Vector>& x) const;
  std::string name() const;
};

/// Minimum exceedance count for a t-grid point to enter the alpha fit.
inline constexpr std::int64_t kUsableTailCount = 30;

struct ConcentrationFit {
  std::vector<double> t_grid;
  std::vector<double> raw_tails;  // P(|F - mean| >= t), empirical
  std::vector<double> tails;      // monotone envelope of raw_tails
  std::vector<std::int64_t> counts;
  std::vector<int> usable_points;
  double mean = 0.0;
  double alpha_hat = 0.0;       // min over usable t of -log(max(tail, 1/m)/2) / t^2
  double alpha_std_error = 0.0; // delta method at the minimising t
  int argmin = -1;
  std::int64_t m = 0;
  Seed seed = 0;
};

/// Samples m points (m >= 1e4), recentres F by its empirical mean and fits
/// alpha in P(|F| >= t) <= 2 exp(-alpha t^2). t_grid must be increasing
/// and positive; empty means `default_t_grid` on the observed deviations.
ConcentrationFit concentration_profile(const ConvexBody& body, const LipschitzFunctional& F,
                                       std::vector<double> t_grid, std::int64_t m, Seed seed);

/// Same fit on precomputed functional values.
ConcentrationFit fit_concentration(const Vector& values, std::vector<double> t_grid, Seed seed);

/// k * max|dev| / points, k = 1..points.
std::vector<double> default_t_grid(double max_deviation, int points = 256);

struct Tau1ProxyOptions {
  int random_directions = 0;  // extra probes <u, x>, u uniform on the sphere
  int grid_points = 256;
};

struct Tau1Proxy {
  Estimate value;  // min alpha_hat over the probe family
  std::vector<std::string> probes;
  std::vector<double> alphas;
  int argmin = -1;
};

/// Proxy for tau_1(body) up to the (unknown) equivalence constants: the
/// smallest fitted alpha over coordinates, the recentred norm and optional
/// random directions, all evaluated on one sample of size m.
Tau1Proxy tau1_proxy(const ConvexBody& body, std::int64_t m, Seed seed,
                     const Tau1ProxyOptions& options = {});

struct ProofStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;  // combined
  bool asserted = false;   // false: value recorded only
  bool pass = true;
};

struct Lemma1Options {
  std::int64_t ot_samples = 1024;     // per repetition, 10 repetitions
  std::int64_t moment_samples = 200'000;
  std::int64_t tau_samples = 400'000;
  std::int64_t containment_samples = 10'000;
  double isotropy_tolerance = 0.05;
  double sigmas = 4.0;  // asserted steps: lhs <= rhs + sigmas * stderr
};

struct Lemma1Audit {
  int dim = 0;
  double v = 1.0;              // (|B| / |K|)^{1/n}
  double entropy = 0.0;        // H(m_K | m_B) = n log v
  Estimate tau_proxy;
  Estimate mean_norm_K;        // W_1(m_K, delta_0)
  Estimate w1_KB;
  double sqrt_term = 0.0;      // sqrt(2 H / tau)
  Estimate mean_norm_B;        // W_1(m_B, delta_0)
  Estimate second_moment_B;    // (int_B |x|^2)^{1/2}
  Estimate L_B;
  double sqrt_n_LB = 0.0;
  double borell_ratio = 0.0;   // (avg_K |x|^2)^{1/2} / avg_K |x|
  double tau_upper = 0.0;      // W_1^2 / (2 H), infinite when H = 0
  Estimate L_K;
  double bound_shape = 0.0;    // (1 + sqrt(log v)) v tau^{-1/2}
  double c_implied = 0.0;      // L_K / bound_shape
  std::vector<ProofStep> steps;
  bool pass = true;            // all asserted steps
};

/// Evaluates each quantity in the chain
///   avg_K |x| <= W_1(m_K, m_B) + W_1(m_B, delta_0) <= sqrt(2H/tau) + int_B |x|
///            <= sqrt(2 n log v / tau) + sqrt(n) L_B
/// for K ⊆ B with B isotropic of volume one. Constant-free steps are
/// asserted within `sigmas` combined standard errors; the rest are recorded.
/// Throws ContainmentError when K is not inside B and InvalidArgument when
/// B is not isotropic.
Lemma1Audit lemma1_audit(const ConvexBody& K, const ConvexBody& B, Seed seed,
                         const Lemma1Options& options = {});

}  // namespace tci
