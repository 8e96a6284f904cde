#pragma once

// Entropy and variance functionals, spectral / log-Sobolev quotients, the
// trace log-Sobolev inequality verifier, the Dirichlet constant comparison
// and the one-dimensional transport proof-chain audit.

#include <string>
#include <variant>
#include <vector>

#include "tci/domain.hpp"
#include "tci/test_function.hpp"

namespace tci {

/// Deterministic midpoint-type grid (error = |I(N) - I(N/2)|).
struct Grid {
  int resolution = 128;
};
/// Uniform Monte Carlo sample (error = standard error).
struct MonteCarlo {
  std::int64_t m = 100'000;
  Seed seed = 1;
};
using Integration = std::variant<Grid, MonteCarlo>;

/// Ent(f) = E[f log f] - E[f] log E[f] under the uniform probability measure.
Estimate entropy_functional(const TestFunction& f, const Domain& domain, const Integration& how);
Estimate variance_functional(const TestFunction& f, const Domain& domain, const Integration& how);
/// E|grad f|^2 / Var(f): an upper bound for the spectral gap.
Estimate rayleigh_quotient(const TestFunction& f, const Domain& domain, const Integration& how);
/// 2 E|grad f|^2 / Ent(f^2): an upper bound for the log-Sobolev constant.
Estimate lsi_quotient(const TestFunction& f, const Domain& domain, const Integration& how);
/// (mean squared distance to the centroid)^{-1}, without the absolute
/// constant.
Estimate kls_quantity(const ConvexBody& body, std::int64_t m, Seed seed);

enum class Verdict { pass, violation };
const char* to_string(Verdict v);

/// One trace log-Sobolev check. Terms are reported in the normalised frame
/// (f rescaled so the mean of |f|^p is 1); every term is homogeneous of
/// degree p in f and invariant under dilations of the domain.
struct TLSIReport {
  double p = 1;
  double q = 0;           // conjugate exponent; infinite when p = 1
  bool q_infinite = false;
  int dim = 1;
  double volume = 0;      // |Omega| from the interior quadrature
  double mean_fp = 0;     // mean of |f|^p before normalisation
  double lhs = 0;         // Ent(|f|^p)
  double grad_coeff = 0;  // ((p-1)/(n+q))^{p-1} / (omega_n^{p/n} |Omega|^{1-p/n})
  double grad_integral = 0;
  double grad_term = 0;
  double bdry_coeff = 0;  // 1 / (omega_n^{1/n} |Omega|^{1-1/n})
  double bdry_integral = 0;
  double bdry_term = 0;
  double slack = 0;       // grad_term + bdry_term - lhs
  double tolerance = 0;   // sum of |T(N) - T(N/2)| over the three terms, times the scale
  int resolution = 0;
  std::int64_t interior_nodes = 0;
  std::int64_t boundary_nodes = 0;
  Verdict verdict = Verdict::pass;
};

/// ((p-1)/(n+q))^{p-1} with the p = 1 value 1.
double tlsi_prefactor(double p, int n);

TLSIReport tlsi_verify(const Domain& domain, const TestFunction& f, double p, int resolution = 128,
                       double tolerance_scale = 1.0);

struct DirichletConstants {
  double prop_constant = 0;    // |Omega|^{2/n} / ((n+2) omega_n^{2/n})
  double classical_bound = 0;  // (1/(n|Omega|)) int |x - z|^2, z the centroid
  double ratio = 0;            // prop_constant / classical_bound (<= 1, = 1 for balls)
  double error = 0;            // |ratio(N) - ratio(N/2)|
};
DirichletConstants dirichlet_lsi_constants(const Domain& domain, int resolution = 256);

struct ChainStep {
  std::string name;
  double lhs = 0, rhs = 0;
  double slack = 0;      // rhs - lhs (identities: signed residual)
  double tolerance = 0;  // grid-error estimate
  bool identity = false; // equality expected up to grid error
  bool pass = true;
};

struct BrenierChain1D {
  double a = 0, b = 1;     // original interval
  double p = 2, q = 2;
  double R = 1;            // target half-length; the grid lives on (-R, R)
  std::vector<double> grid;
  std::vector<double> f_grid;         // normalised so the mean of f^p is 1
  std::vector<double> transport_map;  // T, with T' = f^p, T(-R) = -R, T(R) = R
  double tv_distance = 0;             // push-forward vs uniform target
  std::vector<ChainStep> steps;       // TLSI1..TLSI4 plus sub-steps
  double entropy = 0, grad_term = 0, bdry_term = 0, total_slack = 0;
  bool pass = true;
};

/// f sampled at N + 1 equispaced nodes of [a, b] (endpoints included),
/// f > 0. For p > 1 the interval is rescaled to length
/// 2 ((1+q)/(p-1))^{1/q}.
/// Step tolerances are |slack(N) - slack(N/2)| (plus rounding), times
/// `tolerance_scale`.
BrenierChain1D brenier_chain_check_1d(const std::vector<double>& f_grid, double a, double b,
                                      double p, double tolerance_scale = 1.0);
BrenierChain1D brenier_chain_check_1d(const TestFunction& f, double a, double b, double p,
                                      int nodes = 4097, double tolerance_scale = 1.0);

}  // namespace tci
