#include "tci/serialization.hpp"

#include <cmath>
#include <limits>

namespace tci {

namespace {

const char* type_name(const Json& j) { return j.type_name(); }

}  // namespace

JsonReader::JsonReader(const Json& object, std::string path) : json_(&object), path_(std::move(path)) {
  if (!object.is_object())
    throw SchemaError(path_, std::string("expected an object, got ") + type_name(object));
}

bool JsonReader::has(const std::string& key) const { return json_->contains(key); }

std::string JsonReader::child_path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

std::string JsonReader::element_path(const std::string& key, std::size_t i) const {
  return child_path(key) + "[" + std::to_string(i) + "]";
}

void JsonReader::fail(const std::string& key, const std::string& message) const {
  throw SchemaError(key.empty() ? path_ : child_path(key), message);
}

const Json& JsonReader::raw(const std::string& key) {
  seen_.insert(key);
  const auto it = json_->find(key);
  if (it == json_->end()) fail(key, "required field is missing");
  return *it;
}

double checked_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, std::string("expected a number, got ") + type_name(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "number must be finite");
  return v;
}

double JsonReader::number(const std::string& key) { return checked_number(raw(key), child_path(key)); }

double JsonReader::number(const std::string& key, double fallback) {
  return has(key) ? number(key) : (seen_.insert(key), fallback);
}

std::int64_t JsonReader::integer(const std::string& key) {
  const Json& j = raw(key);
  if (!j.is_number_integer()) fail(key, std::string("expected an integer, got ") + type_name(j));
  return j.get<std::int64_t>();
}

std::int64_t JsonReader::integer(const std::string& key, std::int64_t fallback) {
  return has(key) ? integer(key) : (seen_.insert(key), fallback);
}

std::uint64_t JsonReader::u64(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) {
    seen_.insert(key);
    return fallback;
  }
  const Json& j = raw(key);
  if (!j.is_number_unsigned()) fail(key, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

bool JsonReader::boolean(const std::string& key, bool fallback) {
  if (!has(key)) {
    seen_.insert(key);
    return fallback;
  }
  const Json& j = raw(key);
  if (!j.is_boolean()) fail(key, std::string("expected a boolean, got ") + type_name(j));
  return j.get<bool>();
}

std::string JsonReader::string(const std::string& key) {
  const Json& j = raw(key);
  if (!j.is_string()) fail(key, std::string("expected a string, got ") + type_name(j));
  return j.get<std::string>();
}

std::string JsonReader::string(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : (seen_.insert(key), fallback);
}

std::vector<double> JsonReader::numbers(const std::string& key) {
  const Json& j = raw(key);
  if (!j.is_array()) fail(key, std::string("expected an array, got ") + type_name(j));
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(checked_number(j[i], element_path(key, i)));
  return out;
}

std::vector<int> JsonReader::integers(const std::string& key) {
  const Json& j = raw(key);
  if (!j.is_array()) fail(key, std::string("expected an array, got ") + type_name(j));
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw SchemaError(element_path(key, i), "expected an integer");
    out.push_back(j[i].get<int>());
  }
  return out;
}

Matrix JsonReader::matrix(const std::string& key) {
  const Json& j = raw(key);
  if (!j.is_array() || j.empty()) fail(key, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(key, "rows must be non-empty arrays");
  Matrix M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw SchemaError(element_path(key, r), "all rows must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          checked_number(j[r][c], element_path(key, r) + "[" + std::to_string(c) + "]");
  }
  return M;
}

JsonReader JsonReader::object(const std::string& key) { return JsonReader(raw(key), child_path(key)); }

std::vector<JsonReader> JsonReader::objects(const std::string& key) {
  const Json& j = raw(key);
  if (!j.is_array()) fail(key, std::string("expected an array, got ") + type_name(j));
  std::vector<JsonReader> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.emplace_back(j[i], element_path(key, i));
  return out;
}

void JsonReader::finish() const {
  for (auto it = json_->begin(); it != json_->end(); ++it)
    if (!seen_.count(it.key())) fail(it.key(), "unknown field");
}

namespace {

int positive_dim(JsonReader& r) {
  const auto n = r.integer("dim");
  if (n < 1 || n > 64) r.fail("dim", "dimension must be in [1, 64]");
  return static_cast<int>(n);
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> from_vector(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Json matrix_json(const Matrix& M) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

// Library errors raised while building an object become schema errors at
// the object's path.
template <typename F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const InvalidArgument& e) {
    throw SchemaError(path, e.what());
  } catch (const DomainError& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

ConvexBody body_from_json(JsonReader r) {
  const std::string type = r.string("type");
  const bool volume_one = r.boolean("volume_one", false);
  ConvexBody body = at_path(r.path(), [&]() -> ConvexBody {
    if (type == "ball") return ConvexBody::ball(positive_dim(r), r.number("radius", 1.0));
    if (type == "cube") return ConvexBody::cube(positive_dim(r), r.number("side", 1.0));
    if (type == "l1_ball") return ConvexBody::l1_ball(positive_dim(r), r.number("radius", 1.0));
    if (type == "interval") return ConvexBody::interval(r.number("lo"), r.number("hi"));
    if (type == "h_polytope") {
      const Matrix A = r.matrix("A");
      const auto b = r.numbers("b");
      if (static_cast<Eigen::Index>(b.size()) != A.rows()) r.fail("b", "needs one offset per row of A");
      std::vector<HalfSpace> rows;
      for (Eigen::Index i = 0; i < A.rows(); ++i)
        rows.push_back({A.row(i).transpose(), b[static_cast<std::size_t>(i)]});
      return ConvexBody::h_polytope(std::move(rows));
    }
    if (type == "affine") {
      const ConvexBody base = body_from_json(r.object("base"));
      const Matrix L = r.matrix("linear");
      const int n = base.dim();
      if (L.rows() != n || L.cols() != n) r.fail("linear", "must be " + std::to_string(n) + "x" + std::to_string(n));
      Vector shift = Vector::Zero(n);
      if (r.has("shift")) {
        shift = to_vector(r.numbers("shift"));
        if (shift.size() != n) r.fail("shift", "dimension mismatch");
      }
      return apply_affine(base, L, shift);
    }
    r.fail("type", "unknown body type '" + type + "'");
  });
  r.finish();
  if (volume_one) body = at_path(r.path(), [&] { return normalize_to_volume_one(body); });
  return body;
}

Json body_to_json(const ConvexBody& body) {
  Json j;
  switch (body.kind()) {
    case ConvexBody::Kind::ball:
      j = {{"type", "ball"}, {"dim", body.dim()}, {"radius", body.radius()}};
      break;
    case ConvexBody::Kind::cube:
      j = {{"type", "cube"}, {"dim", body.dim()}, {"side", body.side()}};
      break;
    case ConvexBody::Kind::l1_ball:
      j = {{"type", "l1_ball"}, {"dim", body.dim()}, {"radius", body.radius()}};
      break;
    case ConvexBody::Kind::h_polytope:
      j = {{"type", "h_polytope"}, {"A", matrix_json(body.row_matrix())},
           {"b", from_vector(body.row_offsets())}};
      break;
    case ConvexBody::Kind::affine:
      j = {{"type", "affine"}, {"base", body_to_json(body.base())},
           {"linear", matrix_json(body.linear())}, {"shift", from_vector(body.shift())}};
      break;
  }
  return j;
}

Domain domain_from_json(JsonReader r) {
  const std::string type = r.string("type");
  if (type == "rect_union" || type == "l_shape") {
    RectUnion region = at_path(r.path(), [&]() -> RectUnion {
      if (type == "l_shape") return RectUnion::l_shape(r.number("size", 1.0));
      const Json& rects = r.raw("rects");
      if (!rects.is_array() || rects.empty()) r.fail("rects", "expected a non-empty array");
      std::vector<Rect> out;
      for (std::size_t i = 0; i < rects.size(); ++i) {
        const std::string p = r.element_path("rects", i);
        if (!rects[i].is_array() || rects[i].size() != 4)
          throw SchemaError(p, "expected [x0, y0, x1, y1]");
        out.push_back({checked_number(rects[i][0], p), checked_number(rects[i][1], p),
                       checked_number(rects[i][2], p), checked_number(rects[i][3], p)});
      }
      return RectUnion(std::move(out));
    });
    const double s = r.number("scale", 1.0);
    r.finish();
    return s == 1.0 ? Domain(region) : Domain(region.scaled(s));
  }
  return body_from_json(std::move(r));
}

Json domain_to_json(const Domain& domain) {
  if (const auto* b = domain.body()) return body_to_json(*b);
  Json rects = Json::array();
  for (const auto& rc : domain.rect_union()->rects()) rects.push_back({rc.x0, rc.y0, rc.x1, rc.y1});
  return {{"type", "rect_union"}, {"rects", rects}};
}

TestFunction function_from_json(JsonReader r) {
  const std::string type = r.string("type");
  const double amplitude = r.number("amplitude", 1.0);
  const double dilation = r.number("dilation", 1.0);
  const double offset = r.number("offset", 0.0);
  TestFunction f = at_path(r.path(), [&]() -> TestFunction {
    if (type == "polynomial") {
      const int n = positive_dim(r);
      std::vector<TestFunction::Monomial> terms;
      for (auto& t : r.objects("terms")) {
        terms.push_back({t.number("c"), t.integers("powers")});
        t.finish();
      }
      return TestFunction::polynomial(n, std::move(terms));
    }
    if (type == "trigonometric") {
      const int n = positive_dim(r);
      const double c = r.number("constant", 0.0);
      std::vector<TestFunction::Wave> waves;
      for (auto& w : r.objects("waves")) {
        waves.push_back({w.integers("k"), w.number("cos", 0.0), w.number("sin", 0.0)});
        w.finish();
      }
      return TestFunction::trigonometric(n, c, std::move(waves));
    }
    if (type == "radial")
      return TestFunction::radial(to_vector(r.numbers("center")), r.numbers("coefficients"));
    if (type == "exponential")
      return TestFunction::exponential(to_vector(r.numbers("a")), r.number("b", 0.0));
    if (type == "grid")
      return TestFunction::user_grid(to_vector(r.numbers("lo")), to_vector(r.numbers("hi")),
                                     r.integers("shape"), r.numbers("values"));
    if (type == "constant") return TestFunction::constant(positive_dim(r), r.number("value"));
    if (type == "linear") return TestFunction::linear(to_vector(r.numbers("a")));
    if (type == "random_trig")
      return TestFunction::random_trigonometric(positive_dim(r), r.u64("seed", 0),
                                                r.u64("index", 0), r.boolean("positive", false),
                                                static_cast<int>(r.integer("waves", 3)));
    r.fail("type", "unknown function type '" + type + "'");
  });
  r.finish();
  return at_path(r.path(), [&] { return f.scaled(amplitude, dilation).shifted(offset); });
}

Json function_to_json(const TestFunction& f) {
  Json j;
  switch (f.kind()) {
    case TestFunction::Kind::polynomial: {
      Json terms = Json::array();
      for (const auto& m : f.monomials()) terms.push_back({{"c", m.coefficient}, {"powers", m.powers}});
      j = {{"type", "polynomial"}, {"dim", f.dim()}, {"terms", terms}};
      break;
    }
    case TestFunction::Kind::trigonometric: {
      Json waves = Json::array();
      for (const auto& w : f.waves())
        waves.push_back({{"k", w.frequency}, {"cos", w.cos_coefficient}, {"sin", w.sin_coefficient}});
      j = {{"type", "trigonometric"}, {"dim", f.dim()}, {"constant", f.trig_constant()}, {"waves", waves}};
      break;
    }
    case TestFunction::Kind::radial:
      j = {{"type", "radial"}, {"center", from_vector(f.center())},
           {"coefficients", f.radial_coefficients()}};
      break;
    case TestFunction::Kind::exponential:
      j = {{"type", "exponential"}, {"a", from_vector(f.exponent())}, {"b", f.exponent_offset()}};
      break;
    case TestFunction::Kind::user_grid:
      j = {{"type", "grid"}, {"lo", from_vector(f.grid_lo())}, {"hi", from_vector(f.grid_hi())},
           {"shape", f.grid_shape()}, {"values", f.grid_values()}};
      break;
  }
  if (f.amplitude() != 1.0) j["amplitude"] = f.amplitude();
  if (f.dilation() != 1.0) j["dilation"] = f.dilation();
  if (f.offset() != 0.0) j["offset"] = f.offset();
  return j;
}

std::vector<TestFunction> functions_from_json(const Json& j, const std::string& path) {
  std::vector<TestFunction> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(function_from_json(JsonReader(j[i], path + "[" + std::to_string(i) + "]")));
    if (out.empty()) throw SchemaError(path, "function list is empty");
    return out;
  }
  JsonReader r(j, path);
  const std::string family = r.string("family");
  if (family != "random_trig") r.fail("family", "unknown family '" + family + "'");
  const int n = positive_dim(r);
  const auto seed = r.u64("seed", 0);
  const auto count = r.integer("count");
  if (count < 1 || count > 100000) r.fail("count", "must be in [1, 100000]");
  const bool positive = r.boolean("positive", false);
  const auto first = r.u64("first_index", 0);
  r.finish();
  for (std::int64_t k = 0; k < count; ++k)
    out.push_back(TestFunction::random_trigonometric(n, seed, first + static_cast<std::uint64_t>(k), positive));
  return out;
}

}  // namespace tci
