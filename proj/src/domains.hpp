#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ka {

// Constructive geometry over open primitives. JSON form:
//   {"type": "all"} | {"type": "empty"}
//   {"type": "rect", "lo": [..], "hi": [..]}        open box
//   {"type": "ball", "center": [..], "radius": r}   open ball
//   {"type": "point", "at": [..]}                   empty; its closure is the point
//   {"type": "halfspace", "normal": [..], "offset": c}   {n . x > c}
//   {"type": "union" | "intersection", "of": [...]}
//   {"type": "difference", "of": [A, B]}            A minus the closure of B
class Shape {
 public:
  static Shape from_json(const nlohmann::json& j, int dim);
  // membership of the open set, or of its closure
  bool contains(const double* x, bool closure = false) const;
  int dim() const { return dim_; }
  nlohmann::json to_json() const { return spec_; }

 private:
  enum class Kind { all, empty, rect, ball, point, halfspace, unite, intersect, difference };
  Kind kind_ = Kind::empty;
  int dim_ = 0;
  std::vector<double> a_, b_;
  double r_ = 0;
  std::vector<Shape> kids_;
  nlohmann::json spec_;
};

struct Window {
  std::vector<double> lo, hi;
};

// Cells sit at the nodes x = lo + i h, i = 0..n-1 per axis, x1 the slowest
// index. A cell belongs to X when its center does.
struct GridDomain {
  int dim = 0;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> lo{0, 0, 0};
  double h = 0;
  std::vector<std::uint8_t> occ;
  std::optional<Shape> shape;  // set when rasterized from a CSG spec
  std::string source;

  std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  std::size_t index(int i0, int i1 = 0, int i2 = 0) const {
    return (static_cast<std::size_t>(i0) * n[1] + i1) * n[2] + i2;
  }
  bool in(int i0, int i1 = 0, int i2 = 0) const { return occ[index(i0, i1, i2)] != 0; }
  double coord(int axis, int i) const { return lo[static_cast<std::size_t>(axis)] + i * h; }
  Window window() const;
  bool same_grid(const GridDomain& o) const;
  std::size_t count() const;
  // cell-wise inclusion
  bool subset_of(const GridDomain& o) const;
  nlohmann::json to_json() const;  // metadata only
};

GridDomain rasterize(const Shape& shape, const Window& window, double h);
// {"dim": 2, "window": {"lo": [..], "hi": [..]}, "h": 0.1, "shape": {...}};
// a missing or empty shape gives the empty set
GridDomain rasterize(const nlohmann::json& spec);
GridDomain rasterize_text(const std::string& json_text);

// Exact Euclidean distance from each cell center to the nearest complement
// cell center (and to the cells just outside the window when
// exterior_counts). +inf where there is no such cell.
struct DistanceField {
  GridDomain grid;  // geometry only
  std::vector<double> d;
  double at(int i0, int i1 = 0, int i2 = 0) const { return d[grid.index(i0, i1, i2)]; }
};
DistanceField distance_field(const GridDomain& X, bool exterior_counts = false);

}  // namespace ka
