#include "tci/functional.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tci/sampling.hpp"

namespace tci {

const char* to_string(Verdict v) { return v == Verdict::pass ? "PASS" : "VIOLATION"; }

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Uniform points on a domain (rectangle unions: area-weighted cell choice).
Matrix sample_domain(const Domain& domain, std::int64_t m, Seed seed) {
  if (m < 2) throw InvalidArgument("Monte Carlo integration needs at least two samples");
  if (const auto* body = domain.body()) return sample_uniform(*body, m, seed).points;
  const RectUnion& r = *domain.rect_union();
  const auto& xs = r.xs();
  const auto& ys = r.ys();
  std::vector<double> cumulative;
  std::vector<std::pair<long, long>> cells;
  double total = 0.0;
  for (long i = 0; i + 1 < static_cast<long>(xs.size()); ++i)
    for (long j = 0; j + 1 < static_cast<long>(ys.size()); ++j)
      if (r.cell_inside(i, j)) {
        total += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
        cumulative.push_back(total);
        cells.emplace_back(i, j);
      }
  Matrix pts(2, m);
  for (std::int64_t k = 0; k < m; ++k) {
    RandomStream rng(seed, static_cast<std::uint64_t>(k));
    const double u = rng.uniform() * total;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    const auto c = cells[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cells.size() - 1)];
    pts(0, k) = rng.uniform(xs[c.first], xs[c.first + 1]);
    pts(1, k) = rng.uniform(ys[c.second], ys[c.second + 1]);
  }
  return pts;
}

// A smooth function h of the means of a few per-point features; the grid
// path takes weighted means, the Monte Carlo path adds a delta-method error.
struct MeanFunctional {
  int features;
  std::function<void(const TestFunction&, const Eigen::Ref<const Vector>&, double*)> feature;
  std::function<double(const Vector&)> h;
  std::function<Vector(const Vector&)> grad_h;
};

Vector weighted_means(const MeanFunctional& mf, const TestFunction& f, const Matrix& nodes,
                      const Vector& weights) {
  Vector acc = Vector::Zero(mf.features);
  Vector tmp(mf.features);
  for (Eigen::Index k = 0; k < nodes.cols(); ++k) {
    mf.feature(f, nodes.col(k), tmp.data());
    acc += weights(k) * tmp;
  }
  return acc / weights.sum();
}

Estimate evaluate(const MeanFunctional& mf, const TestFunction& f, const Domain& domain,
                  const Integration& how) {
  if (f.dim() != domain.dim()) throw InvalidArgument("test function and domain dimensions differ");
  if (const auto* grid = std::get_if<Grid>(&how)) {
    if (grid->resolution < 2) throw InvalidArgument("grid resolution must be >= 2");
    const auto fine = interior_quadrature(domain, grid->resolution);
    const auto coarse = interior_quadrature(domain, grid->resolution / 2);
    const double v = mf.h(weighted_means(mf, f, fine.nodes, fine.weights));
    const double v2 = mf.h(weighted_means(mf, f, coarse.nodes, coarse.weights));
    return {v, std::abs(v - v2), fine.size(), 0};
  }
  const auto& mc = std::get<MonteCarlo>(how);
  const Matrix pts = sample_domain(domain, mc.m, mc.seed);
  Matrix feats(mf.features, pts.cols());
  for (Eigen::Index k = 0; k < pts.cols(); ++k) mf.feature(f, pts.col(k), feats.col(k).data());
  const Vector mean = feats.rowwise().mean();
  const Matrix centred = feats.colwise() - mean;
  const Matrix cov = centred * centred.transpose() / static_cast<double>(pts.cols() - 1);
  const Vector g = mf.grad_h(mean);
  const double var = std::max(0.0, g.dot(cov * g)) / static_cast<double>(pts.cols());
  return {mf.h(mean), std::sqrt(var), pts.cols(), mc.seed};
}

void require_nonnegative(double v) {
  if (v < 0.0) throw InvalidArgument("entropy: f must be nonnegative on the domain");
}

double entropy_of_means(double m1, double m2) {
  if (!(m1 > 0.0)) throw InvalidArgument("entropy: the mean of f is zero");
  return m2 - m1 * std::log(m1);
}

}  // namespace

Estimate entropy_functional(const TestFunction& f, const Domain& domain, const Integration& how) {
  MeanFunctional mf{
      2,
      [](const TestFunction& fn, const Eigen::Ref<const Vector>& x, double* out) {
        const double v = fn(x);
        require_nonnegative(v);
        out[0] = v;
        out[1] = xlogx(v);
      },
      [](const Vector& m) { return entropy_of_means(m(0), m(1)); },
      [](const Vector& m) {
        Vector g(2);
        g << -std::log(m(0)) - 1.0, 1.0;
        return g;
      }};
  return evaluate(mf, f, domain, how);
}

Estimate variance_functional(const TestFunction& f, const Domain& domain, const Integration& how) {
  MeanFunctional mf{
      2,
      [](const TestFunction& fn, const Eigen::Ref<const Vector>& x, double* out) {
        const double v = fn(x);
        out[0] = v;
        out[1] = v * v;
      },
      [](const Vector& m) { return std::max(0.0, m(1) - m(0) * m(0)); },
      [](const Vector& m) {
        Vector g(2);
        g << -2.0 * m(0), 1.0;
        return g;
      }};
  return evaluate(mf, f, domain, how);
}

Estimate rayleigh_quotient(const TestFunction& f, const Domain& domain, const Integration& how) {
  auto variance = [](const Vector& m) {
    const double v = m(1) - m(0) * m(0);
    if (!(v > 1e-14 * std::max(m(1), 1e-300)))
      throw InvalidArgument("rayleigh_quotient: variance is zero");
    return v;
  };
  MeanFunctional mf{
      3,
      [](const TestFunction& fn, const Eigen::Ref<const Vector>& x, double* out) {
        const double v = fn(x);
        out[0] = v;
        out[1] = v * v;
        out[2] = fn.gradient(x).squaredNorm();
      },
      [=](const Vector& m) { return m(2) / variance(m); },
      [=](const Vector& m) {
        const double v = variance(m);
        Vector g(3);
        g << 2.0 * m(0) * m(2) / (v * v), -m(2) / (v * v), 1.0 / v;
        return g;
      }};
  return evaluate(mf, f, domain, how);
}

Estimate lsi_quotient(const TestFunction& f, const Domain& domain, const Integration& how) {
  auto ent = [](const Vector& m) {
    const double e = entropy_of_means(m(0), m(1));
    if (!(e > 1e-14 * m(0))) throw InvalidArgument("lsi_quotient: Ent(f^2) is zero");
    return e;
  };
  MeanFunctional mf{
      3,
      [](const TestFunction& fn, const Eigen::Ref<const Vector>& x, double* out) {
        const double v = fn(x);
        out[0] = v * v;
        out[1] = xlogx(v * v);
        out[2] = fn.gradient(x).squaredNorm();
      },
      [=](const Vector& m) { return 2.0 * m(2) / ent(m); },
      [=](const Vector& m) {
        const double e = ent(m);
        const double d = -2.0 * m(2) / (e * e);
        Vector g(3);
        g << d * (-std::log(m(0)) - 1.0), d, 2.0 / e;
        return g;
      }};
  return evaluate(mf, f, domain, how);
}

Estimate kls_quantity(const ConvexBody& body, std::int64_t m, Seed seed) {
  const auto cloud = sample_uniform(body, m, seed);
  const Vector z = cloud.points.rowwise().mean();
  const Vector d2 = (cloud.points.colwise() - z).colwise().squaredNorm().transpose();
  const Estimate mean = mean_estimate(d2, seed);
  return {1.0 / mean.value, mean.std_error / (mean.value * mean.value), m, seed};
}

// ---------------------------------------------------------------------------
// Trace log-Sobolev inequality

double tlsi_prefactor(double p, int n) {
  if (!(p >= 1.0)) throw InvalidArgument("tlsi: p must be >= 1");
  if (p == 1.0) return 1.0;
  const double q = p / (p - 1.0);
  return std::pow((p - 1.0) / (n + q), p - 1.0);
}

namespace {

struct TlsiTerms {
  double volume, mean_fp, lhs, grad_integral, bdry_integral, grad_term, bdry_term;
  std::int64_t interior, boundary;
};

TlsiTerms tlsi_terms(const Domain& domain, const TestFunction& f, double p, int resolution) {
  const int n = domain.dim();
  const auto inner = interior_quadrature(domain, resolution);
  const auto bdry = boundary_quadrature(domain, resolution);
  TlsiTerms t{};
  t.interior = inner.size();
  t.boundary = bdry.size();
  double s_g = 0.0, s_glogg = 0.0, s_grad = 0.0;
  for (Eigen::Index k = 0; k < inner.size(); ++k) {
    const auto x = inner.nodes.col(k);
    const double g = std::pow(std::abs(f(x)), p);
    const double w = inner.weights(k);
    s_g += w * g;
    s_glogg += w * xlogx(g);
    s_grad += w * std::pow(f.gradient(x).norm(), p);
  }
  double s_b = 0.0;
  for (Eigen::Index k = 0; k < bdry.size(); ++k)
    s_b += bdry.weights(k) * std::pow(std::abs(f(bdry.nodes.col(k))), p);

  const double vol = inner.total_weight();
  const double omega = unit_ball_volume(n);
  t.volume = vol;
  t.mean_fp = s_g / vol;
  t.grad_integral = s_grad;
  t.bdry_integral = s_b;
  const double grad_coeff =
      tlsi_prefactor(p, n) / (std::pow(omega, p / n) * std::pow(vol, 1.0 - p / n));
  const double bdry_coeff = 1.0 / (std::pow(omega, 1.0 / n) * std::pow(vol, 1.0 - 1.0 / n));
  if (t.mean_fp > 0.0) {
    // normalised frame: divide by the mean of |f|^p
    const double ent = s_glogg / vol - xlogx(t.mean_fp);
    t.lhs = ent / t.mean_fp;
    t.grad_term = grad_coeff * s_grad / t.mean_fp;
    t.bdry_term = bdry_coeff * s_b / t.mean_fp;
  }
  return t;
}

}  // namespace

TLSIReport tlsi_verify(const Domain& domain, const TestFunction& f, double p, int resolution,
                       double tolerance_scale) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("tlsi_verify: p must be >= 1");
  if (f.dim() != domain.dim()) throw InvalidArgument("tlsi_verify: dimension mismatch");
  if (resolution < 16) throw InvalidArgument("tlsi_verify: resolution must be >= 16");
  if (!(tolerance_scale >= 0.0)) throw InvalidArgument("tlsi_verify: tolerance scale must be >= 0");
  const int n = domain.dim();
  const TlsiTerms fine = tlsi_terms(domain, f, p, resolution);
  const TlsiTerms coarse = tlsi_terms(domain, f, p, resolution / 2);

  TLSIReport r;
  r.p = p;
  r.q_infinite = p == 1.0;
  r.q = r.q_infinite ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  r.dim = n;
  r.volume = fine.volume;
  r.mean_fp = fine.mean_fp;
  r.lhs = fine.lhs;
  const double omega = unit_ball_volume(n);
  r.grad_coeff = tlsi_prefactor(p, n) / (std::pow(omega, p / n) * std::pow(fine.volume, 1.0 - p / n));
  r.bdry_coeff = 1.0 / (std::pow(omega, 1.0 / n) * std::pow(fine.volume, 1.0 - 1.0 / n));
  r.grad_integral = fine.grad_integral;
  r.bdry_integral = fine.bdry_integral;
  r.grad_term = fine.grad_term;
  r.bdry_term = fine.bdry_term;
  r.slack = r.grad_term + r.bdry_term - r.lhs;
  const double richardson = std::abs(fine.lhs - coarse.lhs) +
                            std::abs(fine.grad_term - coarse.grad_term) +
                            std::abs(fine.bdry_term - coarse.bdry_term);
  const double rounding = 1e-12 * (std::abs(r.lhs) + r.grad_term + r.bdry_term);
  r.tolerance = tolerance_scale * (richardson + rounding);
  r.resolution = resolution;
  r.interior_nodes = fine.interior;
  r.boundary_nodes = fine.boundary;
  r.verdict = r.slack >= -r.tolerance ? Verdict::pass : Verdict::violation;
  return r;
}

DirichletConstants dirichlet_lsi_constants(const Domain& domain, int resolution) {
  if (resolution < 2) throw InvalidArgument("dirichlet_lsi_constants: resolution must be >= 2");
  const int n = domain.dim();
  auto ratio_at = [&](int res, DirichletConstants& out) {
    const auto quad = interior_quadrature(domain, res);
    const double vol = quad.total_weight();
    const Vector z = quad.nodes * quad.weights / vol;
    double second = 0.0;
    for (Eigen::Index k = 0; k < quad.size(); ++k)
      second += quad.weights(k) * (quad.nodes.col(k) - z).squaredNorm();
    out.prop_constant = std::pow(vol, 2.0 / n) / ((n + 2.0) * std::pow(unit_ball_volume(n), 2.0 / n));
    out.classical_bound = second / (n * vol);
    out.ratio = out.prop_constant / out.classical_bound;
  };
  DirichletConstants fine, coarse;
  ratio_at(resolution, fine);
  ratio_at(resolution / 2, coarse);
  fine.error = std::abs(fine.ratio - coarse.ratio);
  return fine;
}

// ---------------------------------------------------------------------------
// One-dimensional transport proof chain

namespace {

struct ChainValues {
  std::vector<ChainStep> steps;
  double entropy = 0, grad_term = 0, bdry_term = 0, total_slack = 0, tv = 0;
  std::vector<double> f, T;
};

// Trapezoid average over (-R, R) of values on equispaced nodes.
double average(const std::vector<double>& v, double h, double R) {
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * h / (2.0 * R);
}

std::vector<double> derivative(const std::vector<double>& v, double h) {
  const std::size_t N = v.size();
  std::vector<double> d(N);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[N - 1] = (3.0 * v[N - 1] - 4.0 * v[N - 2] + v[N - 3]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < N; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  return d;
}

ChainValues chain_values(std::vector<double> f, double p, double R) {
  const std::size_t N = f.size();
  const double h = 2.0 * R / static_cast<double>(N - 1);
  const bool p1 = p == 1.0;
  const double q = p1 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);

  // normalise: mean of f^p is 1
  std::vector<double> g(N);
  for (std::size_t i = 0; i < N; ++i) g[i] = std::pow(f[i], p);
  const double mean_g = average(g, h, R);
  const double c = std::pow(mean_g, -1.0 / p);
  for (std::size_t i = 0; i < N; ++i) {
    f[i] *= c;
    g[i] /= mean_g;
  }

  // T' = f^p, T(-R) = -R (1-D Monge-Ampere for the uniform target on (-R, R))
  std::vector<double> T(N);
  T[0] = -R;
  for (std::size_t i = 1; i < N; ++i) T[i] = T[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
  for (std::size_t i = 1; i < N; ++i)
    if (T[i] < T[i - 1]) throw NumericalError("brenier chain: transport map is not monotone");

  const std::vector<double> df = derivative(f, h);
  auto avg = [&](auto&& fn) {
    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = fn(i);
    return average(v, h, R);
  };

  ChainValues out;
  auto add = [&](std::string name, double lhs, double rhs, bool identity) {
    ChainStep s;
    s.name = std::move(name);
    s.lhs = lhs;
    s.rhs = rhs;
    s.slack = rhs - lhs;
    s.identity = identity;
    out.steps.push_back(std::move(s));
  };

  const double ent = avg([&](std::size_t i) { return xlogx(g[i]); });
  const double gTp = avg([&](std::size_t i) { return g[i] * g[i]; });  // T' = g
  add("TLSI1", ent, gTp - 1.0, false);

  const double boundary_flux = (T[N - 1] * g[N - 1] - T[0] * g[0]) / (2.0 * R);
  const double ibp = -p * avg([&](std::size_t i) { return std::pow(f[i], p - 1.0) * T[i] * df[i]; });
  add("TLSI2", gTp, ibp + boundary_flux, true);

  // in 1-D the boundary coefficient is 1 / omega_1 and R / |Omega| = 1/2 as well
  const double bdry_term = (g[0] + g[N - 1]) / unit_ball_volume(1);
  add("TLSI3", boundary_flux, R / (2.0 * R) * (g[0] + g[N - 1]), false);

  const double grad_coeff =
      tlsi_prefactor(p, 1) / (std::pow(unit_ball_volume(1), p) * std::pow(2.0 * R, 1.0 - p));
  const double mean_dfp = avg([&](std::size_t i) { return std::pow(std::abs(df[i]), p); });
  const double grad_term = grad_coeff * mean_dfp * 2.0 * R;  // coefficient times the Lebesgue integral
  if (p1) {
    add("TLSI4.holder", ibp, R * mean_dfp, false);
    add("TLSI4", ibp, grad_term, false);
  } else {
    const double moment = avg([&](std::size_t i) { return g[i] * std::pow(std::abs(T[i]), q); });
    const double holder = p * std::pow(moment, 1.0 / q) * std::pow(mean_dfp, 1.0 / p);
    add("TLSI4.holder", ibp, holder, false);
    add("TLSI4.transport", moment, std::pow(R, q) / (1.0 + q), true);
    add("TLSI4.amgm", holder, (p - 1.0) * moment + mean_dfp, false);
    add("TLSI4", ibp, 1.0 + grad_term, false);
  }

  // Push-forward consistency: cell masses spread over their image cells,
  // binned on the target and compared with the uniform law.
  constexpr int kBins = 64;
  std::vector<double> bins(kBins, 0.0);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double mass = 0.5 * h * (g[i] + g[i + 1]) / (2.0 * R);
    const double lo = T[i], hi = T[i + 1];
    if (hi <= lo) continue;
    const double bw = 2.0 * R / kBins;
    int b0 = std::clamp(static_cast<int>((lo + R) / bw), 0, kBins - 1);
    const int b1 = std::clamp(static_cast<int>((hi + R) / bw), 0, kBins - 1);
    for (int b = b0; b <= b1; ++b) {
      const double s = std::max(lo, -R + b * bw), e = std::min(hi, -R + (b + 1) * bw);
      if (e > s) bins[b] += mass * (e - s) / (hi - lo);
    }
  }
  for (double m : bins) out.tv += 0.5 * std::abs(m - 1.0 / kBins);

  out.entropy = ent;
  out.grad_term = grad_term;
  out.bdry_term = bdry_term;
  out.total_slack = grad_term + bdry_term - ent;
  out.f = std::move(f);
  out.T = std::move(T);
  return out;
}

}  // namespace

BrenierChain1D brenier_chain_check_1d(const std::vector<double>& f_grid, double a, double b,
                                      double p, double tolerance_scale) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("brenier chain: p must be >= 1");
  if (!(tolerance_scale >= 0.0)) throw InvalidArgument("brenier chain: tolerance scale must be >= 0");
  if (!(b > a)) throw InvalidArgument("brenier chain: empty interval");
  const std::size_t N = f_grid.size();
  if (N < 9 || (N - 1) % 2 != 0)
    throw InvalidArgument("brenier chain: need an odd number (>= 9) of grid nodes");
  for (double v : f_grid)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("brenier chain: f must be positive");

  BrenierChain1D out;
  out.a = a;
  out.b = b;
  out.p = p;
  out.q = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  out.R = p == 1.0 ? 0.5 * (b - a) : std::pow((1.0 + out.q) / (p - 1.0), 1.0 / out.q);

  const ChainValues fine = chain_values(f_grid, p, out.R);
  std::vector<double> half;
  for (std::size_t i = 0; i < N; i += 2) half.push_back(f_grid[i]);
  const ChainValues coarse = chain_values(half, p, out.R);

  out.steps = fine.steps;
  for (std::size_t k = 0; k < out.steps.size(); ++k) {
    auto& s = out.steps[k];
    s.tolerance = tolerance_scale * (std::abs(s.slack - coarse.steps[k].slack) +
                                     1e-12 * (1.0 + std::abs(s.lhs) + std::abs(s.rhs)));
    s.pass = s.identity ? std::abs(s.slack) <= s.tolerance : s.slack >= -s.tolerance;
    out.pass = out.pass && s.pass;
  }
  out.grid.resize(N);
  for (std::size_t i = 0; i < N; ++i)
    out.grid[i] = -out.R + 2.0 * out.R * static_cast<double>(i) / static_cast<double>(N - 1);
  out.f_grid = fine.f;
  out.transport_map = fine.T;
  out.tv_distance = fine.tv;
  out.entropy = fine.entropy;
  out.grad_term = fine.grad_term;
  out.bdry_term = fine.bdry_term;
  out.total_slack = fine.total_slack;
  out.pass = out.pass && out.tv_distance <= 1e-3;
  return out;
}

BrenierChain1D brenier_chain_check_1d(const TestFunction& f, double a, double b, double p,
                                      int nodes, double tolerance_scale) {
  if (f.dim() != 1) throw InvalidArgument("brenier chain: f must be one-dimensional");
  if (nodes < 9) throw InvalidArgument("brenier chain: need at least 9 nodes");
  std::vector<double> values(static_cast<std::size_t>(nodes));
  Vector x(1);
  for (int i = 0; i < nodes; ++i) {
    x(0) = a + (b - a) * i / (nodes - 1.0);
    values[i] = f(x);
  }
  return brenier_chain_check_1d(values, a, b, p, tolerance_scale);
}

}  // namespace tci
