#include "tci/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "tci/lp.hpp"

namespace tci {

struct ConvexBody::Data {
  Kind kind = Kind::ball;
  int dim = 0;
  double size = 0.0;  // radius or side
  std::vector<HalfSpace> rows;
  Matrix A;  // h-polytope rows
  Vector b;
  Vector interior;
  Vector box_lo, box_hi;
  std::optional<ConvexBody> base;
  Matrix linear, linear_inv;
  Vector shift;
  double abs_det = 1.0;
};

struct BodyAccess {
  static const ConvexBody::Data& get(const ConvexBody& body) { return *body.data_; }
};

namespace {

using Data = ConvexBody::Data;

const Data& data_of(const ConvexBody& body) { return BodyAccess::get(body); }

void require_dim(int dim) {
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
}

void require_size(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw InvalidArgument(std::string(name) + " must be positive and finite");
}

void check_point(const ConvexBody& body, Eigen::Index size) {
  if (size != body.dim())
    throw InvalidArgument("point dimension " + std::to_string(size) +
                          " does not match body dimension " +
                          std::to_string(body.dim()));
}

double l1(const Eigen::Ref<const Vector>& x) { return x.lpNorm<1>(); }

// Ray-probing interior point: average of the 2n boundary hits along the
// coordinate rays through `center`.
Vector coordinate_ray_average(const Matrix& A, const Vector& b,
                              const Vector& center) {
  const Eigen::Index n = center.size();
  Vector sum = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double t_hi = std::numeric_limits<double>::infinity();
    double t_lo = -t_hi;
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
      const double slope = A(r, i);
      const double slack = b(r) - A.row(r).dot(center);
      if (slope > 0) t_hi = std::min(t_hi, slack / slope);
      if (slope < 0) t_lo = std::max(t_lo, slack / slope);
    }
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi) || t_hi - t_lo <= 0.0)
      throw InvalidArgument("polytope is unbounded or flat along axis " +
                            std::to_string(i));
    sum += 2.0 * center;
    sum(i) += t_lo + t_hi;
  }
  return sum / static_cast<double>(2 * n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

ConvexBody ConvexBody::ball(int dim, double radius) {
  require_dim(dim);
  require_size(radius, "ball radius");
  auto d = std::make_shared<Data>();
  d->kind = Kind::ball;
  d->dim = dim;
  d->size = radius;
  d->interior = Vector::Zero(dim);
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::cube(int dim, double side) {
  require_dim(dim);
  require_size(side, "cube side");
  auto d = std::make_shared<Data>();
  d->kind = Kind::cube;
  d->dim = dim;
  d->size = side;
  d->interior = Vector::Zero(dim);
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::l1_ball(int dim, double radius) {
  require_dim(dim);
  require_size(radius, "l1-ball radius");
  auto d = std::make_shared<Data>();
  d->kind = Kind::l1_ball;
  d->dim = dim;
  d->size = radius;
  d->interior = Vector::Zero(dim);
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::h_polytope(std::vector<HalfSpace> rows) {
  if (rows.empty()) throw InvalidArgument("H-polytope needs at least one row");
  const Eigen::Index n = rows.front().normal.size();
  require_dim(static_cast<int>(n));
  Matrix A(rows.size(), n);
  Vector b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].normal.size() != n)
      throw InvalidArgument("H-polytope rows have inconsistent dimensions");
    if (!(rows[r].normal.norm() > 0.0) || !std::isfinite(rows[r].offset))
      throw InvalidArgument("H-polytope row " + std::to_string(r) +
                            " has a zero normal or non-finite offset");
    A.row(r) = rows[r].normal.transpose();
    b(r) = rows[r].offset;
  }

  auto d = std::make_shared<Data>();
  d->kind = Kind::h_polytope;
  d->dim = static_cast<int>(n);
  d->box_lo.resize(n);
  d->box_hi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(n);
      c(i) = sign;
      const auto sol = lp::maximize(A, b, c);
      if (sol.status == lp::Status::infeasible)
        throw InvalidArgument("H-polytope is empty");
      if (sol.status == lp::Status::unbounded)
        throw InvalidArgument("H-polytope is unbounded along axis " +
                              std::to_string(i));
      (sign > 0 ? d->box_hi(i) : d->box_lo(i)) = sign * sol.value;
    }
  }

  // Chebyshev centre: maximise r with a_i·x + |a_i| r <= b_i.
  Matrix Ac(A.rows() + 1, n + 1);
  Vector bc(A.rows() + 1);
  Ac.setZero();
  Ac.topLeftCorner(A.rows(), n) = A;
  Ac.col(n).head(A.rows()) = A.rowwise().norm();
  bc.head(A.rows()) = b;
  Ac(A.rows(), n) = 1.0;
  bc(A.rows()) = (d->box_hi - d->box_lo).maxCoeff();
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  const auto center = lp::maximize(Ac, bc, c);
  const double extent = (d->box_hi - d->box_lo).maxCoeff();
  if (center.status != lp::Status::optimal || center.value <= 1e-9 * extent)
    throw InvalidArgument("H-polytope has empty interior");

  d->interior = coordinate_ray_average(A, b, center.x.head(n));
  d->rows = std::move(rows);
  d->A = std::move(A);
  d->b = std::move(b);
  return ConvexBody(std::move(d));
}

ConvexBody ConvexBody::interval(double lo, double hi) {
  if (!(hi > lo)) throw InvalidArgument("interval needs lo < hi");
  Matrix linear(1, 1);
  linear(0, 0) = hi - lo;
  Vector shift(1);
  shift(0) = 0.5 * (lo + hi);
  return apply_affine(cube(1, 1.0), linear, shift);
}

ConvexBody::Kind ConvexBody::kind() const { return data_->kind; }
int ConvexBody::dim() const { return data_->dim; }

double ConvexBody::radius() const {
  if (data_->kind != Kind::ball && data_->kind != Kind::l1_ball)
    throw InvalidArgument("radius() requires a ball or l1-ball");
  return data_->size;
}

double ConvexBody::side() const {
  if (data_->kind != Kind::cube) throw InvalidArgument("side() requires a cube");
  return data_->size;
}

const std::vector<HalfSpace>& ConvexBody::rows() const {
  if (data_->kind != Kind::h_polytope)
    throw InvalidArgument("rows() requires an H-polytope");
  return data_->rows;
}

const Matrix& ConvexBody::row_matrix() const {
  if (data_->kind != Kind::h_polytope)
    throw InvalidArgument("row_matrix() requires an H-polytope");
  return data_->A;
}

const Vector& ConvexBody::row_offsets() const {
  if (data_->kind != Kind::h_polytope)
    throw InvalidArgument("row_offsets() requires an H-polytope");
  return data_->b;
}

const ConvexBody& ConvexBody::base() const {
  if (data_->kind != Kind::affine)
    throw InvalidArgument("base() requires an affine image");
  return *data_->base;
}

const Matrix& ConvexBody::linear() const {
  if (data_->kind != Kind::affine)
    throw InvalidArgument("linear() requires an affine image");
  return data_->linear;
}

const Matrix& ConvexBody::linear_inverse() const {
  if (data_->kind != Kind::affine)
    throw InvalidArgument("linear_inverse() requires an affine image");
  return data_->linear_inv;
}

const Vector& ConvexBody::shift() const {
  if (data_->kind != Kind::affine)
    throw InvalidArgument("shift() requires an affine image");
  return data_->shift;
}

const Vector& ConvexBody::interior_point() const { return data_->interior; }

// ---------------------------------------------------------------------------
// Volumes

double unit_ball_volume(int n) {
  if (n < 1) throw DomainError("unit_ball_volume: n must be >= 1");
  const double half = 0.5 * n;
  double value;
  if (1.0 + half < 170.0) {
    value = std::pow(std::numbers::pi, half) / std::tgamma(1.0 + half);
  } else {
    value = std::exp(half * std::log(std::numbers::pi) - std::lgamma(1.0 + half));
  }
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError("unit_ball_volume: Gamma overflow at n = " + std::to_string(n));
  return value;
}

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double closed_form_volume(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
      return unit_ball_volume(n) * std::pow(body.radius(), n);
    case ConvexBody::Kind::cube:
      return std::pow(body.side(), n);
    case ConvexBody::Kind::l1_ball:
      return std::pow(2.0 * body.radius(), n) / factorial(n);
    default:
      return -1.0;
  }
}

}  // namespace

Estimate volume(const ConvexBody& body, const VolumeOptions& options) {
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
    case ConvexBody::Kind::cube:
    case ConvexBody::Kind::l1_ball:
      return Estimate::exact(closed_form_volume(body));
    case ConvexBody::Kind::affine: {
      Estimate base = volume(body.base(), options);
      const double det = data_of(body).abs_det;
      base.value *= det;
      base.std_error *= det;
      return base;
    }
    case ConvexBody::Kind::h_polytope: {
      if (options.samples <= 0)
        throw InvalidArgument("volume: Monte Carlo sample budget must be positive");
      const auto& d = data_of(body);
      const Vector width = d.box_hi - d.box_lo;
      const double box_volume = width.prod();
      RandomStream rng(options.seed, 0);
      Vector x(body.dim());
      std::int64_t hits = 0;
      for (std::int64_t s = 0; s < options.samples; ++s) {
        for (int i = 0; i < body.dim(); ++i) x(i) = d.box_lo(i) + width(i) * rng.uniform();
        if (((d.A * x - d.b).array() <= 0.0).all()) ++hits;
      }
      const double frac = static_cast<double>(hits) / options.samples;
      return {box_volume * frac,
              box_volume * std::sqrt(frac * (1.0 - frac) / options.samples),
              options.samples, options.seed};
    }
  }
  throw InvalidArgument("volume: unknown body kind");
}

// ---------------------------------------------------------------------------
// Membership, chords, support

bool contains(const ConvexBody& body, const Eigen::Ref<const Vector>& x) {
  check_point(body, x.size());
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
      return x.squaredNorm() <= body.radius() * body.radius();
    case ConvexBody::Kind::cube:
      return x.cwiseAbs().maxCoeff() <= 0.5 * body.side();
    case ConvexBody::Kind::l1_ball:
      return l1(x) <= body.radius();
    case ConvexBody::Kind::h_polytope: {
      const auto& d = data_of(body);
      return ((d.A * x - d.b).array() <= 0.0).all();
    }
    case ConvexBody::Kind::affine: {
      const auto& d = data_of(body);
      const Vector y = d.linear_inv * (x - d.shift);
      return contains(body.base(), y);
    }
  }
  return false;
}

std::pair<double, double> chord(const ConvexBody& body,
                                const Eigen::Ref<const Vector>& x,
                                const Eigen::Ref<const Vector>& d) {
  check_point(body, x.size());
  check_point(body, d.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (body.kind()) {
    case ConvexBody::Kind::ball: {
      // |x + t d|^2 = r^2
      const double a = d.squaredNorm();
      const double bq = x.dot(d);
      const double c = x.squaredNorm() - body.radius() * body.radius();
      const double disc = std::max(0.0, bq * bq - a * c);
      const double root = std::sqrt(disc);
      return {(-bq - root) / a, (-bq + root) / a};
    }
    case ConvexBody::Kind::cube: {
      const double h = 0.5 * body.side();
      double lo = -inf, hi = inf;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (d(i) == 0.0) continue;
        const double t1 = (-h - x(i)) / d(i);
        const double t2 = (h - x(i)) / d(i);
        lo = std::max(lo, std::min(t1, t2));
        hi = std::min(hi, std::max(t1, t2));
      }
      return {lo, hi};
    }
    case ConvexBody::Kind::h_polytope: {
      const auto& dd = data_of(body);
      double lo = -inf, hi = inf;
      const Vector slope = dd.A * d;
      const Vector slack = dd.b - dd.A * x;
      for (Eigen::Index r = 0; r < slope.size(); ++r) {
        if (slope(r) > 0) hi = std::min(hi, slack(r) / slope(r));
        if (slope(r) < 0) lo = std::max(lo, slack(r) / slope(r));
      }
      return {lo, hi};
    }
    case ConvexBody::Kind::l1_ball: {
      // |x + t d|_1 is convex piecewise linear in t; solve |x + t d|_1 = r on
      // each side by scanning the breakpoints.
      const double r = body.radius();
      auto solve_side = [&](double dir) {
        std::vector<double> breaks;
        for (Eigen::Index i = 0; i < x.size(); ++i)
          if (d(i) != 0.0) {
            const double t = -x(i) / d(i) * dir;
            if (t > 0) breaks.push_back(t);
          }
        std::sort(breaks.begin(), breaks.end());
        breaks.push_back(inf);
        double t0 = 0.0;
        double f0 = l1(x);
        for (double t1 : breaks) {
          // slope on (t0, t1)
          const double mid = std::isfinite(t1) ? 0.5 * (t0 + t1) : t0 + 1.0;
          const Vector p = x + (mid * dir) * d;
          double slope = 0.0;
          for (Eigen::Index i = 0; i < x.size(); ++i)
            slope += dir * d(i) * (p(i) > 0 ? 1.0 : (p(i) < 0 ? -1.0 : 0.0));
          if (slope > 0) {
            const double t = t0 + (r - f0) / slope;
            if (t <= t1) return t;
          }
          if (!std::isfinite(t1)) break;
          f0 = l1(x + (t1 * dir) * d);
          t0 = t1;
        }
        return inf;
      };
      return {-solve_side(-1.0), solve_side(1.0)};
    }
    case ConvexBody::Kind::affine: {
      const auto& dd = data_of(body);
      const Vector y = dd.linear_inv * (x - dd.shift);
      const Vector e = dd.linear_inv * d;
      return chord(body.base(), y, e);
    }
  }
  return {0.0, 0.0};
}

Vector support_point(const ConvexBody& body, const Eigen::Ref<const Vector>& u) {
  check_point(body, u.size());
  const int n = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::ball: {
      const double norm = u.norm();
      if (norm == 0.0) return Vector::Zero(n);
      return body.radius() / norm * u;
    }
    case ConvexBody::Kind::cube: {
      Vector p(n);
      for (int i = 0; i < n; ++i) p(i) = (u(i) >= 0 ? 0.5 : -0.5) * body.side();
      return p;
    }
    case ConvexBody::Kind::l1_ball: {
      Eigen::Index best;
      u.cwiseAbs().maxCoeff(&best);
      Vector p = Vector::Zero(n);
      p(best) = u(best) >= 0 ? body.radius() : -body.radius();
      return p;
    }
    case ConvexBody::Kind::h_polytope: {
      const auto& d = data_of(body);
      const auto sol = lp::maximize(d.A, d.b, u);
      if (sol.status != lp::Status::optimal)
        throw NumericalError("support_point: LP did not reach an optimum");
      return sol.x;
    }
    case ConvexBody::Kind::affine: {
      const auto& d = data_of(body);
      return d.linear * support_point(body.base(), d.linear.transpose() * u) + d.shift;
    }
  }
  return Vector::Zero(n);
}

double support(const ConvexBody& body, const Eigen::Ref<const Vector>& u) {
  return u.dot(support_point(body, u));
}

std::pair<Vector, Vector> bounding_box(const ConvexBody& body) {
  const int n = body.dim();
  if (body.kind() == ConvexBody::Kind::h_polytope) {
    const auto& d = data_of(body);
    return {d.box_lo, d.box_hi};
  }
  Vector lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    hi(i) = support(body, e);
    lo(i) = -support(body, -e);
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Affine maps

ConvexBody apply_affine(const ConvexBody& body, const Matrix& linear,
                        const Vector& shift) {
  const int n = body.dim();
  if (linear.rows() != n || linear.cols() != n || shift.size() != n)
    throw InvalidArgument("apply_affine: map dimensions do not match the body");
  const double det = linear.determinant();
  // Hadamard bound makes the singularity test scale free.
  const double hadamard = linear.colwise().norm().prod();
  if (!(std::abs(det) > 1e-12 * hadamard) || !std::isfinite(det))
    throw InvalidArgument("apply_affine: linear part is singular");

  auto d = std::make_shared<Data>();
  d->kind = ConvexBody::Kind::affine;
  d->dim = n;
  if (body.kind() == ConvexBody::Kind::affine) {
    const auto& inner = data_of(body);
    d->base = inner.base;
    d->linear = linear * inner.linear;
    d->shift = linear * inner.shift + shift;
  } else {
    d->base = body;
    d->linear = linear;
    d->shift = shift;
  }
  d->linear_inv = d->linear.inverse();
  d->abs_det = std::abs(d->linear.determinant());
  d->interior = d->linear * d->base->interior_point() + d->shift;
  return ConvexBody(std::move(d));
}

ConvexBody scale(const ConvexBody& body, double factor) {
  require_size(factor, "scale factor");
  const int n = body.dim();
  return apply_affine(body, factor * Matrix::Identity(n, n), Vector::Zero(n));
}

ConvexBody translate(const ConvexBody& body, const Vector& offset) {
  const int n = body.dim();
  return apply_affine(body, Matrix::Identity(n, n), offset);
}

ConvexBody normalize_to_volume_one(const ConvexBody& body,
                                   const VolumeOptions& options) {
  const double vol = volume(body, options).value;
  if (!(vol > 0.0)) throw NumericalError("normalize_to_volume_one: zero volume estimate");
  return scale(body, std::pow(vol, -1.0 / body.dim()));
}

// ---------------------------------------------------------------------------
// Polytope helpers

bool is_polytope(const ConvexBody& body) {
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
      return body.dim() == 1;
    case ConvexBody::Kind::affine:
      return is_polytope(body.base());
    default:
      return true;
  }
}

std::vector<HalfSpace> half_spaces(const ConvexBody& body) {
  const int n = body.dim();
  std::vector<HalfSpace> out;
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
      if (n != 1) throw InvalidArgument("half_spaces: a ball is not a polytope");
      [[fallthrough]];
    case ConvexBody::Kind::cube: {
      const double h = body.kind() == ConvexBody::Kind::cube ? 0.5 * body.side()
                                                             : body.radius();
      for (int i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
          Vector a = Vector::Zero(n);
          a(i) = s;
          out.push_back({a, h});
        }
      return out;
    }
    case ConvexBody::Kind::l1_ball: {
      if (n > 20) throw InvalidArgument("half_spaces: l1-ball has too many facets");
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        Vector a(n);
        for (int i = 0; i < n; ++i) a(i) = (mask >> i) & 1u ? -1.0 : 1.0;
        out.push_back({a, body.radius()});
      }
      return out;
    }
    case ConvexBody::Kind::h_polytope:
      return body.rows();
    case ConvexBody::Kind::affine: {
      const auto& d = data_of(body);
      const Matrix inv_t = d.linear_inv.transpose();
      for (const auto& row : half_spaces(body.base())) {
        const Vector a = inv_t * row.normal;
        out.push_back({a, row.offset + a.dot(d.shift)});
      }
      return out;
    }
  }
  return out;
}

std::vector<Vector> polytope_vertices(const ConvexBody& body) {
  const int n = body.dim();
  if (n > 3) throw QuadratureUnsupported("polytope_vertices: only n <= 3 is supported");
  const auto rows = half_spaces(body);
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  Matrix A(m, n);
  Vector b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    A.row(r) = rows[r].normal.transpose() / rows[r].normal.norm();
    b(r) = rows[r].offset / rows[r].normal.norm();
  }
  const double scale_ref = std::max(1.0, b.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale_ref;
  std::vector<Vector> verts;
  std::vector<int> idx(n);
  // Enumerate n-subsets of rows.
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Matrix M(n, n);
      Vector rhs(n);
      for (int k = 0; k < n; ++k) {
        M.row(k) = A.row(idx[k]);
        rhs(k) = b(idx[k]);
      }
      Eigen::FullPivLU<Matrix> lu(M);
      if (lu.rank() < n) return;
      const Vector v = lu.solve(rhs);
      if (((A * v - b).array() > tol).any()) return;
      for (const auto& w : verts)
        if ((w - v).norm() <= 1e3 * tol) return;
      verts.push_back(v);
      return;
    }
    for (int r = start; r < m; ++r) {
      idx[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
  return verts;
}

// ---------------------------------------------------------------------------
// Boundary quadrature

namespace {

struct MeshBuilder {
  int dim;
  std::vector<Vector> nodes, normals;
  std::vector<double> weights;

  void add(Vector node, Vector normal, double weight) {
    nodes.push_back(std::move(node));
    normals.push_back(std::move(normal));
    weights.push_back(weight);
  }

  BoundaryMesh finish(int resolution) const {
    BoundaryMesh mesh;
    const auto count = static_cast<Eigen::Index>(weights.size());
    mesh.nodes.resize(dim, count);
    mesh.normals.resize(dim, count);
    mesh.weights.resize(count);
    for (Eigen::Index k = 0; k < count; ++k) {
      mesh.nodes.col(k) = nodes[k];
      mesh.normals.col(k) = normals[k];
      mesh.weights(k) = weights[k];
    }
    mesh.resolution = resolution;
    return mesh;
  }
};

constexpr std::int64_t kMaxBoundaryNodes = 20'000'000;

void ball_boundary(MeshBuilder& out, int n, double r, int res) {
  const double pi = std::numbers::pi;
  if (n == 1) {
    out.add(Vector::Constant(1, -r), Vector::Constant(1, -1.0), 1.0);
    out.add(Vector::Constant(1, r), Vector::Constant(1, 1.0), 1.0);
  } else if (n == 2) {
    const double w = 2.0 * pi * r / res;
    for (int k = 0; k < res; ++k) {
      const double a = 2.0 * pi * (k + 0.5) / res;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      out.add(r * u, u, w);
    }
  } else if (n == 3) {
    const int n_theta = res, n_phi = 2 * res;
    const double dtheta = pi / n_theta, dphi = 2.0 * pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
      const double theta = (i + 0.5) * dtheta;
      const double w = r * r * std::sin(theta) * dtheta * dphi;
      for (int j = 0; j < n_phi; ++j) {
        const double phi = (j + 0.5) * dphi;
        Vector u(3);
        u << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta);
        out.add(r * u, u, w);
      }
    }
  } else {
    const std::int64_t count =
        std::min<std::int64_t>(static_cast<std::int64_t>(std::pow(res, n - 1)), 1'000'000);
    const double area = n * unit_ball_volume(n) * std::pow(r, n - 1);
    RandomStream rng(derive_seed(0xB0DAu, static_cast<std::uint64_t>(res)), n);
    for (std::int64_t k = 0; k < count; ++k) {
      Vector u(n);
      for (int i = 0; i < n; ++i) u(i) = rng.normal();
      u.normalize();
      out.add(r * u, u, area / count);
    }
  }
}

void cube_boundary(MeshBuilder& out, int n, double s, int res) {
  const double h = 0.5 * s;
  if (n == 1) {
    out.add(Vector::Constant(1, -h), Vector::Constant(1, -1.0), 1.0);
    out.add(Vector::Constant(1, h), Vector::Constant(1, 1.0), 1.0);
    return;
  }
  const std::int64_t per_facet = static_cast<std::int64_t>(std::pow(res, n - 1));
  if (2 * n * per_facet > kMaxBoundaryNodes)
    throw QuadratureUnsupported("cube boundary grid exceeds the node budget");
  const double cell = s / res;
  const double w = std::pow(cell, n - 1);
  std::vector<int> digits(n - 1);
  for (int axis = 0; axis < n; ++axis) {
    for (double sign : {-1.0, 1.0}) {
      Vector normal = Vector::Zero(n);
      normal(axis) = sign;
      for (std::int64_t flat = 0; flat < per_facet; ++flat) {
        std::int64_t rem = flat;
        Vector x(n);
        int k = 0;
        for (int i = 0; i < n; ++i) {
          if (i == axis) {
            x(i) = sign * h;
            continue;
          }
          const int digit = static_cast<int>(rem % res);
          rem /= res;
          x(i) = -h + (digit + 0.5) * cell;
          ++k;
        }
        out.add(std::move(x), normal, w);
      }
    }
  }
}

template <typename F>
void subdivide_triangle(const Vector& a, const Vector& b, const Vector& c, int N,
                        F&& emit) {
  const Vector e1 = (b - a) / N, e2 = (c - a) / N;
  const double area =
      0.5 * std::sqrt(std::max(0.0, e1.squaredNorm() * e2.squaredNorm() -
                                        std::pow(e1.dot(e2), 2)));
  for (int i = 0; i < N; ++i)
    for (int j = 0; i + j < N; ++j) {
      const Vector p = a + i * e1 + j * e2;
      emit(Vector(p + (e1 + e2) / 3.0), area);
      if (i + j + 1 < N) emit(Vector(p + 2.0 * (e1 + e2) / 3.0), area);
    }
}

void polytope_boundary(MeshBuilder& out, const ConvexBody& body, int res) {
  const int n = body.dim();
  if (n > 3)
    throw QuadratureUnsupported(
        "quadrature unsupported: boundary of a general polytope in n >= 4");
  const auto verts = polytope_vertices(body);
  auto rows = half_spaces(body);
  const double scale_ref = [&] {
    double s = 1.0;
    for (const auto& v : verts) s = std::max(s, v.cwiseAbs().maxCoeff());
    return s;
  }();
  const double tol = 1e-8 * scale_ref;
  std::vector<std::pair<Vector, double>> seen;
  for (auto& row : rows) {
    const double norm = row.normal.norm();
    Vector a = row.normal / norm;
    const double off = row.offset / norm;
    bool dup = false;
    for (const auto& [sa, so] : seen)
      if ((sa - a).norm() < 1e-9 && std::abs(so - off) < tol) dup = true;
    if (dup) continue;
    seen.emplace_back(a, off);
    std::vector<Vector> facet;
    for (const auto& v : verts)
      if (std::abs(a.dot(v) - off) <= tol) facet.push_back(v);
    if (static_cast<int>(facet.size()) < n) continue;
    if (n == 1) {
      out.add(facet.front(), a, 1.0);
    } else if (n == 2) {
      // Extreme points of the facet along its tangent.
      Vector t(2);
      t << -a(1), a(0);
      auto [lo, hi] = std::minmax_element(facet.begin(), facet.end(),
                                          [&](const Vector& p, const Vector& q) {
                                            return t.dot(p) < t.dot(q);
                                          });
      const Vector p = *lo, q = *hi;
      const double len = (q - p).norm();
      if (len <= tol) continue;
      for (int k = 0; k < res; ++k)
        out.add(p + (k + 0.5) / res * (q - p), a, len / res);
    } else {
      Vector centroid = Vector::Zero(3);
      for (const auto& v : facet) centroid += v;
      centroid /= static_cast<double>(facet.size());
      // In-plane basis and angular order.
      Vector u = (facet.front() - centroid);
      u -= a.dot(u) * a;
      if (u.norm() <= tol) continue;
      u.normalize();
      const Vector w = Eigen::Vector3d(a).cross(Eigen::Vector3d(u));
      std::sort(facet.begin(), facet.end(), [&](const Vector& p, const Vector& q) {
        return std::atan2(w.dot(p - centroid), u.dot(p - centroid)) <
               std::atan2(w.dot(q - centroid), u.dot(q - centroid));
      });
      for (std::size_t k = 0; k < facet.size(); ++k) {
        const Vector& p = facet[k];
        const Vector& q = facet[(k + 1) % facet.size()];
        subdivide_triangle(centroid, p, q, res, [&](Vector node, double area) {
          out.add(std::move(node), a, area);
        });
      }
    }
  }
}

}  // namespace

BoundaryMesh boundary_quadrature(const ConvexBody& body, int resolution) {
  if (resolution < 8) throw InvalidArgument("boundary_quadrature: resolution must be >= 8");
  const int n = body.dim();
  MeshBuilder builder{n, {}, {}, {}};
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
      ball_boundary(builder, n, body.radius(), resolution);
      break;
    case ConvexBody::Kind::cube:
      cube_boundary(builder, n, body.side(), resolution);
      break;
    case ConvexBody::Kind::l1_ball:
    case ConvexBody::Kind::h_polytope:
      polytope_boundary(builder, body, resolution);
      break;
    case ConvexBody::Kind::affine: {
      BoundaryMesh mesh = boundary_quadrature(body.base(), resolution);
      const auto& d = data_of(body);
      const Matrix inv_t = d.linear_inv.transpose();
      for (Eigen::Index k = 0; k < mesh.size(); ++k) {
        // Nanson: dS' = |det A| |A^{-T} nu| dS, nu' = A^{-T} nu / |A^{-T} nu|.
        const Vector pulled = inv_t * mesh.normals.col(k);
        const double stretch = pulled.norm();
        mesh.nodes.col(k) = d.linear * mesh.nodes.col(k) + d.shift;
        mesh.normals.col(k) = pulled / stretch;
        mesh.weights(k) *= d.abs_det * stretch;
      }
      return mesh;
    }
  }
  return builder.finish(resolution);
}

namespace {

struct Fnv1a {
  std::uint64_t state = 0xCBF29CE484222325ull;
  void bytes(const void* p, std::size_t len) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      state ^= c[i];
      state *= 0x100000001B3ull;
    }
  }
  void value(double v) { bytes(&v, sizeof v); }
  void value(int v) { bytes(&v, sizeof v); }
  void values(const double* p, Eigen::Index count) {
    bytes(p, static_cast<std::size_t>(count) * sizeof(double));
  }
};

void hash_body(Fnv1a& h, const ConvexBody& body) {
  h.value(static_cast<int>(body.kind()));
  h.value(body.dim());
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
    case ConvexBody::Kind::l1_ball:
      h.value(body.radius());
      break;
    case ConvexBody::Kind::cube:
      h.value(body.side());
      break;
    case ConvexBody::Kind::h_polytope:
      h.values(body.row_matrix().data(), body.row_matrix().size());
      h.values(body.row_offsets().data(), body.row_offsets().size());
      break;
    case ConvexBody::Kind::affine:
      h.values(body.linear().data(), body.linear().size());
      h.values(body.shift().data(), body.shift().size());
      hash_body(h, body.base());
      break;
  }
}

}  // namespace

std::uint64_t fingerprint(const ConvexBody& body) {
  Fnv1a h;
  hash_body(h, body);
  return h.state;
}

double surface_area(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
      return n == 1 ? 2.0 : n * unit_ball_volume(n) * std::pow(body.radius(), n - 1);
    case ConvexBody::Kind::cube:
      return n == 1 ? 2.0 : 2.0 * n * std::pow(body.side(), n - 1);
    case ConvexBody::Kind::l1_ball:
      return n == 1 ? 2.0
                    : std::pow(2.0, n) * std::pow(body.radius(), n - 1) *
                          std::sqrt(static_cast<double>(n)) / factorial(n - 1);
    default:
      return boundary_quadrature(body, 64).total_weight();
  }
}

}  // namespace tci
