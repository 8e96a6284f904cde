#include "tci/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "tci/isotropy.hpp"

namespace tci {

const char* to_string(OtSolver solver) {
  switch (solver) {
    case OtSolver::exact:
      return "exact";
    case OtSolver::sinkhorn:
      return "sinkhorn";
    case OtSolver::permutation_oracle:
      return "permutation_oracle";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(Matrix support, Vector weights) {
  const auto k = support.cols();
  if (k == 0) throw InvalidArgument("DiscreteMeasure: empty support");
  if (weights.size() != k) throw InvalidArgument("DiscreteMeasure: weight count mismatch");
  for (Eigen::Index i = 0; i < k; ++i)
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i)))
      throw InvalidArgument("DiscreteMeasure: weights must be positive and finite");
  if (!support.allFinite()) throw InvalidArgument("DiscreteMeasure: non-finite support point");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw InvalidArgument("DiscreteMeasure: weights must sum to 1");

  // Merge duplicates: sort lexicographically, then compare within the
  // window where the first coordinate agrees to 1e-12.
  constexpr double tol = 1e-12;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < support.rows(); ++r)
      if (support(r, a) != support(r, b)) return support(r, a) < support(r, b);
    return a < b;
  });
  std::vector<Eigen::Index> owner(static_cast<std::size_t>(k), -1);
  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto a = order[s];
    if (owner[a] >= 0) continue;
    owner[a] = a;
    for (std::size_t t = s + 1; t < order.size(); ++t) {
      const auto b = order[t];
      if (support(0, b) - support(0, a) > tol) break;
      if (owner[b] < 0 && ((support.col(a) - support.col(b)).cwiseAbs().array() <= tol).all())
        owner[b] = a;
    }
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < k; ++i)
    if (owner[i] == i) keep.push_back(i);
  if (static_cast<Eigen::Index>(keep.size()) == k) {
    support_ = std::move(support);
    weights_ = std::move(weights);
    return;
  }
  support_.resize(support.rows(), static_cast<Eigen::Index>(keep.size()));
  weights_ = Vector::Zero(static_cast<Eigen::Index>(keep.size()));
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(k));
  for (std::size_t s = 0; s < keep.size(); ++s) {
    support_.col(static_cast<Eigen::Index>(s)) = support.col(keep[s]);
    slot[keep[s]] = static_cast<Eigen::Index>(s);
  }
  for (Eigen::Index i = 0; i < k; ++i) weights_(slot[owner[i]]) += weights(i);
}

DiscreteMeasure DiscreteMeasure::uniform(Matrix support) {
  const auto k = support.cols();
  if (k == 0) throw InvalidArgument("DiscreteMeasure: empty support");
  Vector w = Vector::Constant(k, 1.0 / static_cast<double>(k));
  return DiscreteMeasure(std::move(support), std::move(w));
}

DiscreteMeasure DiscreteMeasure::from_cloud(const PointCloud& cloud) {
  return DiscreteMeasure(cloud.points, cloud.weights);
}

bool DiscreteMeasure::is_uniform() const {
  const double target = 1.0 / static_cast<double>(size());
  return ((weights_.array() - target).abs() <= 1e-12 * target).all();
}

// ---------------------------------------------------------------------------
// Costs

Matrix cost_matrix(const Matrix& x, const Matrix& y, double p) {
  if (x.rows() != y.rows()) throw InvalidArgument("cost_matrix: dimension mismatch");
  if (p != 1.0 && p != 2.0) throw InvalidArgument("cost_matrix: p must be 1 or 2");
  Matrix c(x.cols(), y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j)
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      const double d2 = (x.col(i) - y.col(j)).squaredNorm();
      c(i, j) = p == 2.0 ? d2 : std::sqrt(d2);
    }
  return c;
}

double median_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  const Matrix c = cost_matrix(mu.support(), nu.support(), p);
  std::vector<double> v(c.data(), c.data() + c.size());
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

namespace {

void check_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (mu.dim() != nu.dim()) throw InvalidArgument("OT: measures live in different dimensions");
  if (p != 1.0 && p != 2.0) throw InvalidArgument("OT: p must be 1 or 2");
}

double marginal_residual(const Matrix& plan, const Vector& a, const Vector& b) {
  const double rows = (plan.rowwise().sum() - a).cwiseAbs().maxCoeff();
  const double cols = (plan.colwise().sum().transpose() - b).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

CouplingPlan finish(Matrix plan, const Matrix& cost, const DiscreteMeasure& mu,
                    const DiscreteMeasure& nu, double p, OtSolver solver) {
  CouplingPlan out;
  out.cost = plan.cwiseProduct(cost).sum();
  out.marginal_residual = marginal_residual(plan, mu.weights(), nu.weights());
  out.plan = std::move(plan);
  out.p = p;
  out.solver = solver;
  return out;
}

// Transportation simplex on a spanning tree of basic cells (u-v method).
struct Cell {
  int i, j;
  double x;
};

Matrix transportation_simplex(const Matrix& cost, const Vector& a, const Vector& b,
                              long& iterations) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  const int nodes = m + n;

  // Northwest corner start: a staircase of exactly m + n - 1 cells.
  std::vector<Cell> cells;
  {
    std::vector<double> ra(a.data(), a.data() + m), rb(b.data(), b.data() + n);
    int i = 0, j = 0;
    for (;;) {
      const double x = std::min(ra[i], rb[j]);
      cells.push_back({i, j, x});
      ra[i] -= x;
      rb[j] -= x;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1)
        ++j;
      else if (j == n - 1)
        ++i;
      else if (ra[i] <= rb[j])
        ++i;
      else
        ++j;
    }
  }

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  auto link = [&](int c) {
    adj[cells[c].i].push_back(c);
    adj[m + cells[c].j].push_back(c);
  };
  auto unlink = [&](int c) {
    for (int node : {cells[c].i, m + cells[c].j}) {
      auto& v = adj[node];
      v.erase(std::find(v.begin(), v.end(), c));
    }
  };
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) link(c);

  const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double tol = 1e-11 * scale;
  const long cap = 100L * nodes * nodes + 1000;
  std::vector<double> pot(static_cast<std::size_t>(nodes));
  std::vector<int> parent_cell(static_cast<std::size_t>(nodes));
  std::vector<char> seen(static_cast<std::size_t>(nodes));

  for (iterations = 0;; ++iterations) {
    if (iterations > cap)
      throw NumericalError("transportation simplex did not terminate after " +
                           std::to_string(iterations) + " pivots");
    // Potentials u_i + v_j = c_ij on basic cells (u_0 = 0).
    std::fill(seen.begin(), seen.end(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    pot[0] = 0.0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int c : adj[v]) {
        const int w = v < m ? m + cells[c].j : cells[c].i;
        if (seen[w]) continue;
        seen[w] = 1;
        pot[w] = cost(cells[c].i, cells[c].j) - pot[v];
        q.push(w);
      }
    }
    // Dantzig pricing.
    double best = -tol;
    int bi = -1, bj = -1;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) {
        const double r = cost(i, j) - pot[i] - pot[m + j];
        if (r < best) {
          best = r;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;

    // Tree path from row bi to column bj.
    std::fill(seen.begin(), seen.end(), 0);
    q.push(bi);
    seen[bi] = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int c : adj[v]) {
        const int w = v < m ? m + cells[c].j : cells[c].i;
        if (seen[w]) continue;
        seen[w] = 1;
        parent_cell[w] = c;
        q.push(w);
      }
    }
    std::vector<int> path;  // from column bj back to row bi
    for (int v = m + bj; v != bi;) {
      const int c = parent_cell[v];
      path.push_back(c);
      v = v < m ? m + cells[c].j : cells[c].i;
    }
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2)
      if (cells[path[k]].x < theta) {
        theta = cells[path[k]].x;
        leave = path[k];
      }
    for (std::size_t k = 0; k < path.size(); ++k) cells[path[k]].x += (k % 2 == 0 ? -theta : theta);
    unlink(leave);
    cells[leave] = {bi, bj, theta};
    link(leave);
  }

  Matrix plan = Matrix::Zero(m, n);
  for (const auto& c : cells) plan(c.i, c.j) += std::max(0.0, c.x);
  return plan;
}

// Altschuler-Weed-Rigollet rounding onto the transport polytope.
Matrix round_to_marginals(Matrix P, const Vector& a, const Vector& b) {
  const Vector r = P.rowwise().sum();
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (r(i) > a(i)) P.row(i) *= a(i) / r(i);
  const Vector c = P.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < P.cols(); ++j)
    if (c(j) > b(j)) P.col(j) *= b(j) / c(j);
  const Vector er = (a - P.rowwise().sum()).cwiseMax(0.0);
  const Vector ec = (b - P.colwise().sum().transpose()).cwiseMax(0.0);
  const double mass = er.sum();
  if (mass > 0.0) P += er * ec.transpose() / mass;
  return P;
}

}  // namespace

std::vector<int> solve_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw InvalidArgument("solve_assignment: cost matrix must be square");
  // Row-major copy for cache-friendly row scans.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a = cost;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      const double* row = a.data() + static_cast<std::ptrdiff_t>(i0 - 1) * n;
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(n);
  for (int j = 1; j <= n; ++j) col[p[j] - 1] = j - 1;
  return col;
}

CouplingPlan exact_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  check_pair(mu, nu, p);
  const Matrix cost = cost_matrix(mu.support(), nu.support(), p);
  if (mu.size() == nu.size() && mu.is_uniform() && nu.is_uniform()) {
    const auto col = solve_assignment(cost);
    const double w = 1.0 / static_cast<double>(mu.size());
    Matrix plan = Matrix::Zero(mu.size(), nu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) plan(i, col[i]) = w;
    return finish(std::move(plan), cost, mu, nu, p, OtSolver::exact);
  }
  long iterations = 0;
  Matrix plan = transportation_simplex(cost, mu.weights(), nu.weights(), iterations);
  auto out = finish(std::move(plan), cost, mu, nu, p, OtSolver::exact);
  out.iterations = iterations;
  return out;
}

CouplingPlan permutation_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  check_pair(mu, nu, p);
  const auto n = mu.size();
  if (nu.size() != n) throw InvalidArgument("permutation_oracle: cardinalities differ");
  if (n > 8) throw InvalidArgument("permutation_oracle: at most 8 points");
  if (!mu.is_uniform() || !nu.is_uniform())
    throw InvalidArgument("permutation_oracle: weights must be uniform");
  const Matrix cost = cost_matrix(mu.support(), nu.support(), p);
  std::vector<int> perm(static_cast<std::size_t>(n)), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) c += cost(i, perm[i]);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Matrix plan = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) plan(i, best[i]) = 1.0 / static_cast<double>(n);
  return finish(std::move(plan), cost, mu, nu, p, OtSolver::permutation_oracle);
}

CouplingPlan sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                      const SinkhornOptions& options) {
  check_pair(mu, nu, p);
  if (!(options.epsilon > 0.0)) throw InvalidArgument("sinkhorn: epsilon must be positive");
  if (options.max_iters < 1) throw InvalidArgument("sinkhorn: max_iters must be >= 1");
  const Matrix C = cost_matrix(mu.support(), nu.support(), p);
  const Vector& a = mu.weights();
  const Vector& b = nu.weights();
  const auto m = C.rows();
  const auto n = C.cols();
  long iters = 0;
  double residual = std::numeric_limits<double>::infinity();
  Matrix P;

  if (!options.log_domain) {
    const double eps = options.epsilon;
    const Matrix K = (-C / eps).unaryExpr([](double x) { return std::exp(x); });
    if ((K.rowwise().sum().array() == 0.0).any() || (K.colwise().sum().array() == 0.0).any())
      throw NumericalError("sinkhorn: Gibbs kernel underflows at epsilon = " +
                           std::to_string(eps) + "; use the log-domain mode");
    Vector u = Vector::Ones(m), v = Vector::Ones(n);
    while (iters < options.max_iters) {
      const Vector Kv = K * v;
      residual = (u.cwiseProduct(Kv) - a).lpNorm<1>();
      if (iters > 0 && residual <= options.tolerance) break;
      u = a.cwiseQuotient(Kv);
      const Vector Ktu = K.transpose() * u;
      v = b.cwiseQuotient(Ktu);
      ++iters;
      if (!u.allFinite() || !v.allFinite() || (Ktu.array() == 0.0).any())
        throw NumericalError("sinkhorn: scaling vectors under/overflowed at epsilon = " +
                             std::to_string(eps) + "; use the log-domain mode");
    }
    residual = (u.cwiseProduct(K * v) - a).lpNorm<1>();
    P = u.asDiagonal() * K * v.asDiagonal();
  } else {
    // Log-stabilised scaling: dual potentials f, g live in the log domain
    // and are absorbed into the kernel whenever the scalings u, v drift
    // far from 1, so no kernel entry the plan needs can underflow.
    Vector f = Vector::Zero(m), g = Vector::Zero(n);
    Vector u = Vector::Ones(m), v = Vector::Ones(n);
    Matrix K(m, n);
    const double target = options.epsilon;
    double eps = options.epsilon_scaling ? std::max(target, C.maxCoeff()) : target;
    auto absorb = [&] {
      f += eps * u.array().log().matrix();
      g += eps * v.array().log().matrix();
      u.setOnes();
      v.setOnes();
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < m; ++i) K(i, j) = std::exp((f(i) + g(j) - C(i, j)) / eps);
      if ((K.rowwise().sum().array() == 0.0).any() || (K.colwise().sum().array() == 0.0).any())
        throw NumericalError("sinkhorn: stabilised kernel lost a row or column");
    };
    constexpr double kAbsorb = 1e30;
    absorb();
    for (;;) {
      const bool final_stage = eps <= target;
      const double stop = final_stage ? options.tolerance : 1e-4;
      const long stage_cap = final_stage ? options.max_iters : 100;
      for (long it = 0; it < stage_cap && iters < options.max_iters; ++it) {
        const Vector Kv = K * v;
        if (it > 0 && it % 10 == 0) {
          residual = (u.cwiseProduct(Kv) - a).lpNorm<1>();
          if (residual <= stop) break;
        }
        u = a.cwiseQuotient(Kv);
        v = b.cwiseQuotient(K.transpose() * u);
        ++iters;
        if (!u.allFinite() || !v.allFinite())
          throw NumericalError("sinkhorn: scaling vectors overflowed");
        if (u.maxCoeff() > kAbsorb || v.maxCoeff() > kAbsorb || u.minCoeff() < 1 / kAbsorb ||
            v.minCoeff() < 1 / kAbsorb)
          absorb();
      }
      if (final_stage || iters >= options.max_iters) break;
      absorb();
      eps = std::max(target, 0.5 * eps);
      absorb();  // re-exponentiate at the new epsilon
    }
    P = u.asDiagonal() * K * v.asDiagonal();
    residual = (P.rowwise().sum() - a).lpNorm<1>() + (P.colwise().sum().transpose() - b).lpNorm<1>();
  }

  auto out = finish(round_to_marginals(std::move(P), a, b), C, mu, nu, p, OtSolver::sinkhorn);
  out.iterations = iters;
  out.converged = residual <= options.tolerance;
  return out;
}

// ---------------------------------------------------------------------------
// Wasserstein estimates

Estimate wasserstein_empirical(const ConvexBody& A, const ConvexBody& B, double p,
                               std::int64_t m, Seed seed) {
  if (A.dim() != B.dim()) throw InvalidArgument("wasserstein_empirical: dimension mismatch");
  if (m < 1 || m > kExactSolverCap)
    throw InvalidArgument("wasserstein_empirical: m must be in [1, 4096]");
  if (p != 1.0 && p != 2.0) throw InvalidArgument("wasserstein_empirical: p must be 1 or 2");
  Vector values(kWassersteinRepetitions);
  for (int r = 0; r < kWassersteinRepetitions; ++r) {
    const auto xa = sample_uniform(A, m, derive_seed(seed, 2 * static_cast<std::uint64_t>(r)));
    const auto xb = sample_uniform(B, m, derive_seed(seed, 2 * static_cast<std::uint64_t>(r) + 1));
    const Matrix cost = cost_matrix(xa.points, xb.points, p);
    const auto col = solve_assignment(cost);
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) total += cost(i, col[i]);
    values(r) = std::pow(total / static_cast<double>(m), 1.0 / p);
  }
  Estimate e = mean_estimate(values, seed);
  e.count = m;
  return e;
}

double wasserstein_1d(std::vector<double> a, std::vector<double> b, double p) {
  if (a.size() != b.size()) throw InvalidArgument("wasserstein_1d: sample counts differ");
  if (a.empty()) throw InvalidArgument("wasserstein_1d: empty samples");
  if (!(p >= 1.0)) throw InvalidArgument("wasserstein_1d: p must be >= 1");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(s / static_cast<double>(a.size()), 1.0 / p);
}

Estimate w1_to_point_mass(const ConvexBody& body, std::int64_t m, Seed seed) {
  return estimate_mean_norm_p(body, 1.0, m, seed);
}

TauBound tci_tau_upper_bound(const ConvexBody& B, const std::vector<ConvexBody>& sub_bodies,
                             double p, std::int64_t m, Seed seed) {
  TauBound out;
  bool any = false;
  for (std::size_t k = 0; k < sub_bodies.size(); ++k) {
    TauBoundEntry e;
    e.entropy = relative_entropy_uniform(sub_bodies[k], B, 10'000, derive_seed(seed, 1000 + k));
    e.wasserstein = wasserstein_empirical(sub_bodies[k], B, p, m, derive_seed(seed, k));
    const double w = e.wasserstein.value;
    if (e.entropy <= 1e-12) {
      e.skipped = true;
      out.warnings.push_back("sub-body " + std::to_string(k) +
                             ": same volume as B (H = 0); skipped");
    } else if (!(w > 2.0 * e.wasserstein.std_error)) {
      e.skipped = true;
      out.warnings.push_back("sub-body " + std::to_string(k) +
                             ": W_p is within 2 stderr of zero; skipped");
    } else {
      e.bound = 2.0 * e.entropy / (w * w);
      if (!any || e.bound < out.value.value) {
        out.value = {e.bound, e.bound * 2.0 * e.wasserstein.std_error / w, m, seed};
        out.argmin = k;
        any = true;
      }
    }
    out.entries.push_back(e);
  }
  if (!any) throw InvalidArgument("tci_tau_upper_bound: every sub-body was skipped");
  return out;
}

}  // namespace tci
