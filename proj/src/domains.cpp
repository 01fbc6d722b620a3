#include "domains.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace ka {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// centers within this of a boundary count as on it
constexpr double kSnap = 1e-9;

std::vector<double> vec(const nlohmann::json& j, const char* key, int dim) {
  require(j.contains(key) && j[key].is_array() && static_cast<int>(j[key].size()) == dim, ErrorCode::parse,
          std::string("shape field '") + key + "' must be an array of length " + std::to_string(dim));
  std::vector<double> v;
  for (auto& x : j[key]) {
    require(x.is_number(), ErrorCode::parse, std::string("shape field '") + key + "' must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

// 1D squared distance transform (lower envelope of parabolas), unit spacing
void edt_1d(const double* f, double* out, int n, std::vector<int>& v, std::vector<double>& z) {
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    while (true) {
      int p = v[static_cast<std::size_t>(k)];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[static_cast<std::size_t>(k)]) {
      v[static_cast<std::size_t>(k)] = q;
      z[static_cast<std::size_t>(k) + 1] = kInf;
    } else {
      ++k;
      v[static_cast<std::size_t>(k)] = q;
      z[static_cast<std::size_t>(k)] = s;
      z[static_cast<std::size_t>(k) + 1] = kInf;
    }
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) out[q] = kInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
    int p = v[static_cast<std::size_t>(j)];
    out[q] = double(q - p) * (q - p) + f[p];
  }
}

}  // namespace

Shape Shape::from_json(const nlohmann::json& j, int dim) {
  require(dim >= 1 && dim <= 3, ErrorCode::invalid_argument, "domains have dimension 1, 2 or 3");
  Shape s;
  s.dim_ = dim;
  s.spec_ = j;
  if (j.is_null() || (j.is_object() && j.empty())) {
    s.kind_ = Kind::empty;
    return s;
  }
  require(j.is_object() && j.contains("type") && j["type"].is_string(), ErrorCode::parse,
          "shape must be an object with a string 'type'");
  const std::string t = j["type"];
  if (t == "all" || t == "plane") {
    s.kind_ = Kind::all;
  } else if (t == "empty") {
    s.kind_ = Kind::empty;
  } else if (t == "rect") {
    s.kind_ = Kind::rect;
    s.a_ = vec(j, "lo", dim);
    s.b_ = vec(j, "hi", dim);
  } else if (t == "ball") {
    s.kind_ = Kind::ball;
    s.a_ = vec(j, "center", dim);
    require(j.contains("radius") && j["radius"].is_number(), ErrorCode::parse, "ball needs a numeric radius");
    s.r_ = j["radius"];
    require(s.r_ >= 0, ErrorCode::parse, "ball radius must be >= 0");
  } else if (t == "point") {
    s.kind_ = Kind::point;
    s.a_ = vec(j, "at", dim);
  } else if (t == "halfspace") {
    s.kind_ = Kind::halfspace;
    s.a_ = vec(j, "normal", dim);
    require(j.contains("offset") && j["offset"].is_number(), ErrorCode::parse, "halfspace needs a numeric offset");
    s.r_ = j["offset"];
  } else if (t == "union" || t == "intersection" || t == "difference") {
    s.kind_ = t == "union" ? Kind::unite : t == "intersection" ? Kind::intersect : Kind::difference;
    require(j.contains("of") && j["of"].is_array(), ErrorCode::parse, t + " needs an array 'of'");
    for (auto& k : j["of"]) s.kids_.push_back(from_json(k, dim));
    if (s.kind_ == Kind::difference)
      require(s.kids_.size() == 2, ErrorCode::parse, "difference takes exactly two shapes");
  } else {
    fail(ErrorCode::parse, "unknown shape type '" + t + "'");
  }
  return s;
}

bool Shape::contains(const double* x, bool closure) const {
  const double e = closure ? kSnap : -kSnap;
  switch (kind_) {
    case Kind::all: return true;
    case Kind::empty: return false;
    case Kind::rect:
      for (int k = 0; k < dim_; ++k)
        if (!(x[k] > a_[k] - e && x[k] < b_[k] + e)) return false;
      return true;
    case Kind::ball: {
      double s = 0;
      for (int k = 0; k < dim_; ++k) s += (x[k] - a_[k]) * (x[k] - a_[k]);
      return std::sqrt(s) < r_ + e;
    }
    case Kind::point: {
      if (!closure) return false;
      double s = 0;
      for (int k = 0; k < dim_; ++k) s += (x[k] - a_[k]) * (x[k] - a_[k]);
      return std::sqrt(s) <= kSnap;
    }
    case Kind::halfspace: {
      double s = 0;
      for (int k = 0; k < dim_; ++k) s += a_[k] * x[k];
      return s > r_ - e;
    }
    case Kind::unite:
      for (auto& k : kids_)
        if (k.contains(x, closure)) return true;
      return false;
    case Kind::intersect:
      for (auto& k : kids_)
        if (!k.contains(x, closure)) return false;
      return true;
    case Kind::difference:
      // the set is A minus cl(B); its closure lies in cl(A) minus int(B)
      return kids_[0].contains(x, closure) && !kids_[1].contains(x, !closure);
  }
  return false;
}

Window GridDomain::window() const {
  Window w;
  for (int k = 0; k < dim; ++k) {
    w.lo.push_back(lo[static_cast<std::size_t>(k)]);
    w.hi.push_back(lo[static_cast<std::size_t>(k)] + (n[static_cast<std::size_t>(k)] - 1) * h);
  }
  return w;
}

bool GridDomain::same_grid(const GridDomain& o) const {
  if (dim != o.dim || n != o.n || std::fabs(h - o.h) > 1e-12 * h) return false;
  for (int k = 0; k < 3; ++k)
    if (std::fabs(lo[static_cast<std::size_t>(k)] - o.lo[static_cast<std::size_t>(k)]) > 1e-9 * h) return false;
  return true;
}

std::size_t GridDomain::count() const {
  std::size_t c = 0;
  for (auto b : occ) c += b;
  return c;
}

bool GridDomain::subset_of(const GridDomain& o) const {
  require(same_grid(o), ErrorCode::invalid_argument, "domains live on different grids");
  for (std::size_t q = 0; q < occ.size(); ++q)
    if (occ[q] && !o.occ[q]) return false;
  return true;
}

nlohmann::json GridDomain::to_json() const {
  auto w = window();
  nlohmann::json j = {{"dim", dim},
                      {"window", {{"lo", w.lo}, {"hi", w.hi}}},
                      {"h", h},
                      {"cells", size()},
                      {"inside", count()},
                      {"source", source}};
  if (shape) j["shape"] = shape->to_json();
  return j;
}

GridDomain rasterize(const Shape& shape, const Window& window, double h) {
  const int dim = shape.dim();
  require(static_cast<int>(window.lo.size()) == dim && static_cast<int>(window.hi.size()) == dim,
          ErrorCode::invalid_argument, "window dimension does not match the shape");
  require(h > 0 && std::isfinite(h), ErrorCode::invalid_argument, "spacing must be positive");
  GridDomain g;
  g.dim = dim;
  g.h = h;
  double total = 1;
  for (int k = 0; k < dim; ++k) {
    double ext = window.hi[k] - window.lo[k];
    require(std::isfinite(ext) && ext >= 0, ErrorCode::invalid_argument, "window needs lo <= hi");
    g.n[static_cast<std::size_t>(k)] = static_cast<int>(std::llround(ext / h)) + 1;
    g.lo[static_cast<std::size_t>(k)] = window.lo[k];
    total *= g.n[static_cast<std::size_t>(k)];
  }
  require(total <= 2e8, ErrorCode::invalid_argument, "window too large for the spacing");
  g.occ.assign(g.size(), 0);
  double x[3];
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        x[0] = g.coord(0, i);
        x[1] = g.coord(1, j);
        x[2] = g.coord(2, k);
        g.occ[g.index(i, j, k)] = shape.contains(x) ? 1 : 0;
      }
  g.shape = shape;
  g.source = "csg";
  return g;
}

GridDomain rasterize(const nlohmann::json& spec) {
  require(spec.is_object(), ErrorCode::parse, "domain spec must be a JSON object");
  require(spec.contains("dim") && spec["dim"].is_number_integer(), ErrorCode::parse, "domain spec needs integer 'dim'");
  int dim = spec["dim"];
  require(dim >= 1 && dim <= 3, ErrorCode::parse, "dim must be 1, 2 or 3");
  require(spec.contains("window") && spec["window"].is_object(), ErrorCode::parse, "domain spec needs 'window'");
  require(spec.contains("h") && spec["h"].is_number(), ErrorCode::parse, "domain spec needs numeric 'h'");
  Window w;
  w.lo = vec(spec["window"], "lo", dim);
  w.hi = vec(spec["window"], "hi", dim);
  nlohmann::json shape = spec.contains("shape") ? spec["shape"] : nlohmann::json::object();
  return rasterize(Shape::from_json(shape, dim), w, spec["h"].get<double>());
}

GridDomain rasterize_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("malformed domain JSON: ") + e.what());
  }
  return rasterize(j);
}

DistanceField distance_field(const GridDomain& X, bool exterior_counts) {
  DistanceField df;
  df.grid = X;
  df.grid.occ.clear();
  df.grid.shape.reset();
  // work grid, padded by one complement layer when the exterior counts
  const int pad = exterior_counts ? 1 : 0;
  std::array<int, 3> m{1, 1, 1};
  for (int k = 0; k < X.dim; ++k) m[static_cast<std::size_t>(k)] = X.n[static_cast<std::size_t>(k)] + 2 * pad;
  auto widx = [&](int a, int b, int c) { return (static_cast<std::size_t>(a) * m[1] + b) * m[2] + c; };
  std::vector<double> f(static_cast<std::size_t>(m[0]) * m[1] * m[2], 0.0);
  for (int a = 0; a < m[0]; ++a)
    for (int b = 0; b < m[1]; ++b)
      for (int c = 0; c < m[2]; ++c) {
        int i = a - pad, j = X.dim > 1 ? b - pad : b, k = X.dim > 2 ? c - pad : c;
        bool inside = i >= 0 && i < X.n[0] && j >= 0 && j < X.n[1] && k >= 0 && k < X.n[2] && X.in(i, j, k);
        f[widx(a, b, c)] = inside ? kInf : 0.0;
      }
  std::vector<int> v;
  std::vector<double> z, line, out;
  for (int axis = 0; axis < X.dim; ++axis) {
    const int len = m[static_cast<std::size_t>(axis)];
    line.resize(static_cast<std::size_t>(len));
    out.resize(static_cast<std::size_t>(len));
    std::array<int, 3> it{0, 0, 0};
    const int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
    for (it[o1] = 0; it[o1] < m[o1]; ++it[o1])
      for (it[o2] = 0; it[o2] < m[o2]; ++it[o2]) {
        for (int q = 0; q < len; ++q) {
          it[axis] = q;
          line[q] = f[widx(it[0], it[1], it[2])];
        }
        edt_1d(line.data(), out.data(), len, v, z);
        for (int q = 0; q < len; ++q) {
          it[axis] = q;
          f[widx(it[0], it[1], it[2])] = out[q];
        }
      }
  }
  df.d.assign(X.size(), kInf);
  for (int i = 0; i < X.n[0]; ++i)
    for (int j = 0; j < X.n[1]; ++j)
      for (int k = 0; k < X.n[2]; ++k) {
        double s = f[widx(i + pad, X.dim > 1 ? j + pad : j, X.dim > 2 ? k + pad : k)];
        df.d[X.index(i, j, k)] = s == kInf ? kInf : std::sqrt(s) * X.h;
      }
  return df;
}

}  // namespace ka
