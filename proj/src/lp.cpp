#include "tci/lp.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace tci::lp {
namespace {

constexpr double kEps = 1e-10;

// Tableau for: maximize c·y, A y <= b, y >= 0.
class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b, const Vector& c)
      : rows_(static_cast<int>(A.rows())),
        cols_(static_cast<int>(A.cols())),
        nonbasic_(cols_ + 1),
        basic_(rows_),
        d_(rows_ + 2, std::vector<double>(cols_ + 2, 0.0)) {
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) d_[i][j] = A(i, j);
      basic_[i] = cols_ + i;
      d_[i][cols_] = -1.0;
      d_[i][cols_ + 1] = b(i);
    }
    for (int j = 0; j < cols_; ++j) {
      nonbasic_[j] = j;
      d_[rows_][j] = -c(j);
    }
    nonbasic_[cols_] = -1;
    d_[rows_ + 1][cols_] = 1.0;
  }

  Solution solve() {
    Solution out;
    int r = 0;
    for (int i = 1; i < rows_; ++i)
      if (d_[i][cols_ + 1] < d_[r][cols_ + 1]) r = i;
    if (rows_ > 0 && d_[r][cols_ + 1] < -kEps) {
      pivot(r, cols_);
      if (!simplex(2) || d_[rows_ + 1][cols_ + 1] < -kEps) {
        out.status = Status::infeasible;
        return out;
      }
      for (int i = 0; i < rows_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= cols_; ++j)
          if (less(d_[i], j, s)) s = j;
        pivot(i, s);
      }
    }
    const bool bounded = simplex(1);
    out.x = Vector::Zero(cols_);
    for (int i = 0; i < rows_; ++i)
      if (basic_[i] >= 0 && basic_[i] < cols_) out.x(basic_[i]) = d_[i][cols_ + 1];
    out.status = bounded ? Status::optimal : Status::unbounded;
    out.value = bounded ? d_[rows_][cols_ + 1]
                        : std::numeric_limits<double>::infinity();
    return out;
  }

 private:
  bool less(const std::vector<double>& row, int j, int s) const {
    return s == -1 || std::pair(row[j], nonbasic_[j]) < std::pair(row[s], nonbasic_[s]);
  }

  void pivot(int r, int s) {
    const double inv = 1.0 / d_[r][s];
    for (int i = 0; i < rows_ + 2; ++i) {
      if (i == r || std::abs(d_[i][s]) <= kEps) continue;
      const double factor = d_[i][s] * inv;
      for (int j = 0; j < cols_ + 2; ++j) d_[i][j] -= d_[r][j] * factor;
      d_[i][s] = d_[r][s] * factor;
    }
    for (int j = 0; j < cols_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (int i = 0; i < rows_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool simplex(int phase) {
    const int objective = rows_ + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= cols_; ++j)
        if (nonbasic_[j] != -phase && less(d_[objective], j, s)) s = j;
      if (d_[objective][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < rows_; ++i) {
        if (d_[i][s] <= kEps) continue;
        if (r == -1 || std::pair(d_[i][cols_ + 1] / d_[i][s], basic_[i]) <
                           std::pair(d_[r][cols_ + 1] / d_[r][s], basic_[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int rows_;
  int cols_;
  std::vector<int> nonbasic_;
  std::vector<int> basic_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

Solution maximize(const Matrix& A, const Vector& b, const Vector& c) {
  const Eigen::Index n = A.cols();
  // Free variables: x = u - v with u, v >= 0.
  Matrix split(A.rows(), 2 * n);
  split << A, -A;
  Vector c_split(2 * n);
  c_split << c, -c;
  Solution raw = Tableau(split, b, c_split).solve();
  Solution out;
  out.status = raw.status;
  out.value = raw.value;
  if (raw.x.size() == 2 * n) out.x = raw.x.head(n) - raw.x.tail(n);
  return out;
}

}  // namespace tci::lp
