#include "tci/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tci {

// ---------------------------------------------------------------------------
// RectUnion

RectUnion::RectUnion(std::vector<Rect> rects) : rects_(std::move(rects)) {
  if (rects_.empty()) throw InvalidArgument("RectUnion needs at least one rectangle");
  for (const auto& r : rects_) {
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0) || !std::isfinite(r.x0 + r.x1 + r.y0 + r.y1))
      throw InvalidArgument("RectUnion: degenerate rectangle");
    xs_.insert(xs_.end(), {r.x0, r.x1});
    ys_.insert(ys_.end(), {r.y0, r.y1});
  }
  for (auto* v : {&xs_, &ys_}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  const long nx = static_cast<long>(xs_.size()) - 1;
  const long ny = static_cast<long>(ys_.size()) - 1;
  inside_.assign(nx * ny, 0);
  for (long i = 0; i < nx; ++i)
    for (long j = 0; j < ny; ++j)
      inside_[i * ny + j] =
          contains(0.5 * (xs_[i] + xs_[i + 1]), 0.5 * (ys_[j] + ys_[j + 1])) ? 1 : 0;
}

RectUnion RectUnion::l_shape(double size) {
  return RectUnion({{0.0, 0.0, 2.0 * size, size}, {0.0, 0.0, size, 2.0 * size}});
}

double RectUnion::area() const {
  double total = 0.0;
  const long ny = static_cast<long>(ys_.size()) - 1;
  for (long i = 0; i + 1 < static_cast<long>(xs_.size()); ++i)
    for (long j = 0; j < ny; ++j)
      if (inside_[i * ny + j]) total += (xs_[i + 1] - xs_[i]) * (ys_[j + 1] - ys_[j]);
  return total;
}

bool RectUnion::contains(double x, double y) const {
  return std::any_of(rects_.begin(), rects_.end(), [&](const Rect& r) {
    return x >= r.x0 && x <= r.x1 && y >= r.y0 && y <= r.y1;
  });
}

RectUnion RectUnion::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("RectUnion::scaled: factor must be positive");
  std::vector<Rect> out;
  for (const auto& r : rects_)
    out.push_back({factor * r.x0, factor * r.y0, factor * r.x1, factor * r.y1});
  return RectUnion(std::move(out));
}

bool RectUnion::cell_inside(long i, long j) const {
  const long nx = static_cast<long>(xs_.size()) - 1;
  const long ny = static_cast<long>(ys_.size()) - 1;
  if (i < 0 || j < 0 || i >= nx || j >= ny) return false;
  return inside_[i * ny + j] != 0;
}

// ---------------------------------------------------------------------------
// Domain

int Domain::dim() const {
  if (const auto* b = body()) return b->dim();
  return 2;
}

double Domain::volume() const {
  if (const auto* b = body()) return tci::volume(*b).value;
  return rect_union()->area();
}

bool Domain::contains(const Eigen::Ref<const Vector>& x) const {
  if (const auto* b = body()) return tci::contains(*b, x);
  if (x.size() != 2) throw InvalidArgument("RectUnion membership needs a 2-D point");
  return rect_union()->contains(x(0), x(1));
}

Domain Domain::scaled(double factor) const {
  if (const auto* b = body()) return Domain(scale(*b, factor));
  return Domain(rect_union()->scaled(factor));
}

// ---------------------------------------------------------------------------
// Interior quadrature

namespace {

constexpr std::int64_t kMaxInteriorNodes = 20'000'000;

struct NodeList {
  int dim;
  std::vector<double> coords;
  std::vector<double> weights;

  void add(std::initializer_list<double> x, double w) {
    coords.insert(coords.end(), x);
    weights.push_back(w);
  }
  void add(const Vector& x, double w) {
    coords.insert(coords.end(), x.data(), x.data() + x.size());
    weights.push_back(w);
  }

  InteriorQuadrature finish(int resolution) const {
    InteriorQuadrature q;
    const auto count = static_cast<Eigen::Index>(weights.size());
    q.nodes = Eigen::Map<const Matrix>(coords.data(), dim, count);
    q.weights = Eigen::Map<const Vector>(weights.data(), count);
    q.resolution = resolution;
    return q;
  }
};

void tensor_box(NodeList& out, const Vector& lo, const Vector& hi,
                const std::vector<int>& cells) {
  const auto n = lo.size();
  std::int64_t total = 1;
  for (int c : cells) total *= c;
  if (total > kMaxInteriorNodes)
    throw QuadratureUnsupported("interior grid exceeds the node budget");
  Vector step(n);
  double w = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    step(i) = (hi(i) - lo(i)) / cells[i];
    w *= step(i);
  }
  Vector x(n);
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rem = flat;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int digit = static_cast<int>(rem % cells[i]);
      rem /= cells[i];
      x(i) = lo(i) + (digit + 0.5) * step(i);
    }
    out.add(x, w);
  }
}

void ball_interior(NodeList& out, int n, double r, int res) {
  const double pi = std::numbers::pi;
  const double dr = r / res;
  if (n == 2) {
    const int n_theta = 2 * res;
    const double dtheta = 2.0 * pi / n_theta;
    for (int i = 0; i < res; ++i) {
      const double rho = (i + 0.5) * dr;
      for (int j = 0; j < n_theta; ++j) {
        const double a = (j + 0.5) * dtheta;
        out.add({rho * std::cos(a), rho * std::sin(a)}, rho * dr * dtheta);
      }
    }
  } else {
    const int n_theta = res, n_phi = 2 * res;
    const double dtheta = pi / n_theta, dphi = 2.0 * pi / n_phi;
    for (int i = 0; i < res; ++i) {
      const double rho = (i + 0.5) * dr;
      for (int j = 0; j < n_theta; ++j) {
        const double t = (j + 0.5) * dtheta;
        const double w = rho * rho * std::sin(t) * dr * dtheta * dphi;
        for (int k = 0; k < n_phi; ++k) {
          const double p = (k + 0.5) * dphi;
          out.add({rho * std::sin(t) * std::cos(p), rho * std::sin(t) * std::sin(p),
                   rho * std::cos(t)},
                  w);
        }
      }
    }
  }
}

void polygon_interior(NodeList& out, const ConvexBody& body, int res) {
  auto verts = polytope_vertices(body);
  if (verts.size() < 3) throw InvalidArgument("polygon has fewer than three vertices");
  Vector c = Vector::Zero(2);
  for (const auto& v : verts) c += v;
  c /= static_cast<double>(verts.size());
  std::sort(verts.begin(), verts.end(), [&](const Vector& p, const Vector& q) {
    return std::atan2(p(1) - c(1), p(0) - c(0)) < std::atan2(q(1) - c(1), q(0) - c(0));
  });
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Vector e1 = (verts[k] - c) / res;
    const Vector e2 = (verts[(k + 1) % verts.size()] - c) / res;
    const double area = 0.5 * std::abs(e1(0) * e2(1) - e1(1) * e2(0));
    for (int i = 0; i < res; ++i)
      for (int j = 0; i + j < res; ++j) {
        const Vector p = c + i * e1 + j * e2;
        out.add(Vector(p + (e1 + e2) / 3.0), area);
        if (i + j + 1 < res) out.add(Vector(p + 2.0 * (e1 + e2) / 3.0), area);
      }
  }
}

void body_interior(NodeList& out, const ConvexBody& body, int res) {
  const int n = body.dim();
  if (n == 1) {
    const auto [lo, hi] = bounding_box(body);
    tensor_box(out, lo, hi, {res});
    return;
  }
  if (n > 3)
    throw QuadratureUnsupported("interior quadrature unsupported for n >= 4");
  switch (body.kind()) {
    case ConvexBody::Kind::cube: {
      const double h = 0.5 * body.side();
      tensor_box(out, Vector::Constant(n, -h), Vector::Constant(n, h),
                 std::vector<int>(n, res));
      return;
    }
    case ConvexBody::Kind::ball:
      ball_interior(out, n, body.radius(), res);
      return;
    case ConvexBody::Kind::l1_ball:
    case ConvexBody::Kind::h_polytope:
      if (n == 2) {
        polygon_interior(out, body, res);
        return;
      }
      throw QuadratureUnsupported("interior quadrature unsupported for 3-D polytopes");
    case ConvexBody::Kind::affine: {
      NodeList inner{n, {}, {}};
      body_interior(inner, body.base(), res);
      const Matrix& A = body.linear();
      const double det = std::abs(A.determinant());
      const auto count = static_cast<Eigen::Index>(inner.weights.size());
      Eigen::Map<const Matrix> pts(inner.coords.data(), n, count);
      const Matrix mapped = (A * pts).colwise() + body.shift();
      for (Eigen::Index k = 0; k < count; ++k) out.add(Vector(mapped.col(k)), det * inner.weights[k]);
      return;
    }
  }
}

void rect_union_interior(NodeList& out, const RectUnion& region, int res) {
  const auto& xs = region.xs();
  const auto& ys = region.ys();
  const double extent = std::max(xs.back() - xs.front(), ys.back() - ys.front());
  const double h = extent / res;
  for (long i = 0; i + 1 < static_cast<long>(xs.size()); ++i)
    for (long j = 0; j + 1 < static_cast<long>(ys.size()); ++j) {
      if (!region.cell_inside(i, j)) continue;
      const int cx = std::max(1, static_cast<int>(std::ceil((xs[i + 1] - xs[i]) / h - 1e-9)));
      const int cy = std::max(1, static_cast<int>(std::ceil((ys[j + 1] - ys[j]) / h - 1e-9)));
      Vector lo(2), hi(2);
      lo << xs[i], ys[j];
      hi << xs[i + 1], ys[j + 1];
      tensor_box(out, lo, hi, {cx, cy});
    }
}

}  // namespace

InteriorQuadrature interior_quadrature(const Domain& domain, int resolution) {
  if (resolution < 1) throw InvalidArgument("interior_quadrature: resolution must be >= 1");
  NodeList out{domain.dim(), {}, {}};
  if (const auto* b = domain.body())
    body_interior(out, *b, resolution);
  else
    rect_union_interior(out, *domain.rect_union(), resolution);
  return out.finish(resolution);
}

BoundaryMesh boundary_quadrature(const Domain& domain, int resolution) {
  if (const auto* b = domain.body()) return boundary_quadrature(*b, resolution);
  if (resolution < 8) throw InvalidArgument("boundary_quadrature: resolution must be >= 8");

  const auto& region = *domain.rect_union();
  const auto& xs = region.xs();
  const auto& ys = region.ys();
  const double extent = std::max(xs.back() - xs.front(), ys.back() - ys.front());
  const double h = extent / resolution;
  std::vector<double> nodes, normals, weights;
  auto segment = [&](double ax, double ay, double bx, double by, double nx, double ny) {
    const double len = std::hypot(bx - ax, by - ay);
    const int cells = std::max(1, static_cast<int>(std::ceil(len / h - 1e-9)));
    for (int k = 0; k < cells; ++k) {
      const double t = (k + 0.5) / cells;
      nodes.insert(nodes.end(), {ax + t * (bx - ax), ay + t * (by - ay)});
      normals.insert(normals.end(), {nx, ny});
      weights.push_back(len / cells);
    }
  };
  const long nx = static_cast<long>(xs.size()) - 1;
  const long ny = static_cast<long>(ys.size()) - 1;
  // Vertical edges x = xs[i] between cells (i-1, j) and (i, j).
  for (long i = 0; i <= nx; ++i)
    for (long j = 0; j < ny; ++j) {
      const bool left = region.cell_inside(i - 1, j), right = region.cell_inside(i, j);
      if (left == right) continue;
      segment(xs[i], ys[j], xs[i], ys[j + 1], left ? 1.0 : -1.0, 0.0);
    }
  // Horizontal edges y = ys[j] between cells (i, j-1) and (i, j).
  for (long j = 0; j <= ny; ++j)
    for (long i = 0; i < nx; ++i) {
      const bool below = region.cell_inside(i, j - 1), above = region.cell_inside(i, j);
      if (below == above) continue;
      segment(xs[i], ys[j], xs[i + 1], ys[j], 0.0, below ? 1.0 : -1.0);
    }
  BoundaryMesh mesh;
  const auto count = static_cast<Eigen::Index>(weights.size());
  mesh.nodes = Eigen::Map<const Matrix>(nodes.data(), 2, count);
  mesh.normals = Eigen::Map<const Matrix>(normals.data(), 2, count);
  mesh.weights = Eigen::Map<const Vector>(weights.data(), count);
  mesh.resolution = resolution;
  return mesh;
}

}  // namespace tci
