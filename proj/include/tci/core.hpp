#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "tci/random.hpp"

namespace tci {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Monte Carlo (or quadrature) result. `std_error` is zero only for
/// closed-form values; for grid quadrature it holds the Richardson estimate
/// |I(N) - I(N/2)|.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t count = 0;
  Seed seed = 0;

  static Estimate exact(double v) { return {v, 0.0, 0, 0}; }
};

/// Invalid input: wrong dimension, non-positive size, bad exponent...
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mathematical domain violations (n = 0, overflowing Gamma, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative solvers that fail to converge or under/overflow.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A containment claim K ⊆ B was refuted; carries the offending point.
class ContainmentError : public std::runtime_error {
 public:
  ContainmentError(const std::string& what, Vector witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  const Vector& witness() const { return witness_; }

 private:
  Vector witness_;
};

/// Boundary or interior quadrature requested for an unsupported body.
class QuadratureUnsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default tolerances; every check scales its threshold by `scale`.
struct Tolerances {
  double closed_form = 1e-9;
  double mc_sigmas = 3.0;
  double scale = 1.0;
};

}  // namespace tci
