#pragma once

// Discrete optimal transport (assignment / transportation simplex, log-domain
// Sinkhorn, brute-force permutations) and Wasserstein estimates between
// uniform measures on convex bodies.

#include <string>
#include <vector>

#include "tci/sampling.hpp"

namespace tci {

/// Finitely supported probability measure. Duplicate support points (within
/// 1e-12 in every coordinate) are merged with summed weights.
class DiscreteMeasure {
 public:
  /// Throws InvalidArgument unless weights are positive and sum to 1 within
  /// 1e-12.
  DiscreteMeasure(Matrix support, Vector weights);
  static DiscreteMeasure uniform(Matrix support);
  static DiscreteMeasure from_cloud(const PointCloud& cloud);

  const Matrix& support() const { return support_; }
  const Vector& weights() const { return weights_; }
  int dim() const { return static_cast<int>(support_.rows()); }
  Eigen::Index size() const { return support_.cols(); }
  bool is_uniform() const;

 private:
  Matrix support_;
  Vector weights_;
};

enum class OtSolver { exact, sinkhorn, permutation_oracle };
const char* to_string(OtSolver solver);

struct CouplingPlan {
  Matrix plan;     // sources x targets
  double cost = 0; // sum plan_ij |x_i - y_j|^p (p-th power, no root)
  double p = 1;
  OtSolver solver = OtSolver::exact;
  double marginal_residual = 0;  // max |row/col sum - weight|
  long iterations = 0;
  bool converged = true;
};

/// |x_i - y_j|^p for p in {1, 2} (p = 2 without a square root).
Matrix cost_matrix(const Matrix& x, const Matrix& y, double p);

/// Exact OT. Equal-size uniform measures are solved as an assignment
/// problem (shortest augmenting paths); anything else by the transportation
/// simplex.
CouplingPlan exact_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Minimum over all permutations; equal-size uniform measures with at most 8
/// points.
CouplingPlan permutation_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Optimal assignment for a square cost matrix; returns col[i] for row i.
std::vector<int> solve_assignment(const Matrix& cost);

struct SinkhornOptions {
  double epsilon = 1e-2;
  long max_iters = 20'000;
  double tolerance = 1e-8;  // L1 marginal violation before rounding
  bool log_domain = true;
  bool epsilon_scaling = true;
};

/// Entropic OT. The returned plan is the Sinkhorn plan after
/// marginal-fixing rounding, so it is feasible; `cost` is its transport
/// cost. The standard-domain variant throws NumericalError on kernel
/// underflow.
CouplingPlan sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                      const SinkhornOptions& options);

/// Median of the pairwise cost matrix (scale for epsilon).
double median_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

inline constexpr std::int64_t kExactSolverCap = 4096;
inline constexpr int kWassersteinRepetitions = 10;

/// Mean over 10 repetitions of W_p between m-point samples of A and B;
/// std_error is the repetition sd / sqrt(10). m <= 4096.
Estimate wasserstein_empirical(const ConvexBody& A, const ConvexBody& B, double p,
                               std::int64_t m, Seed seed);

/// Monotone rearrangement: (mean |a_(i) - b_(i)|^p)^{1/p}. Inputs need not
/// be sorted.
double wasserstein_1d(std::vector<double> a, std::vector<double> b, double p);

/// W_1(m_K, delta_0) = E|x|.
Estimate w1_to_point_mass(const ConvexBody& body, std::int64_t m, Seed seed);

struct TauBoundEntry {
  double entropy = 0;
  Estimate wasserstein;
  double bound = 0;  // 2 H / W^2
  bool skipped = false;
};

struct TauBound {
  Estimate value;  // min over non-skipped entries
  std::size_t argmin = 0;
  std::vector<TauBoundEntry> entries;
  std::vector<std::string> warnings;
};

/// Upper bound on tau_p(B): min_K 2 H(m_K | m_B) / W_p(m_K, m_B)^2 with exact
/// H and empirical W. Overestimating W lowers the bound. Sub-bodies whose W
/// is within 2 stderr of zero, or with H = 0, are skipped; if all are, throws
/// InvalidArgument.
TauBound tci_tau_upper_bound(const ConvexBody& B, const std::vector<ConvexBody>& sub_bodies,
                             double p, std::int64_t m, Seed seed);

}  // namespace tci
