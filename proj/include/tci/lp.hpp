#pragma once

#include "tci/core.hpp"

namespace tci::lp {

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  double value = 0.0;
  Vector x;
};

/// maximize c·x subject to A x <= b with x free. Dense two-phase simplex
/// with Bland-style tie breaking; intended for the small programs that arise
/// from H-polytopes (a few dozen rows, n <= 10).
Solution maximize(const Matrix& A, const Vector& b, const Vector& c);

}  // namespace tci::lp
