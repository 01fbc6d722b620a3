#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "domains.hpp"

namespace ka {

struct SliceComponent {
  std::vector<std::size_t> cells;  // indices into the full grid
  bool bounded = false;            // no cell on the window boundary of the slice
  bool contained_in_X2 = false;
};

// Complement-of-X1 components of the slice x1 = coord(0, slice), face
// adjacency within the slice.
struct SliceComponentReport {
  int slice = 0;
  double c = 0;
  std::vector<SliceComponent> components;
  nlohmann::json to_json(const GridDomain& g) const;
};

SliceComponentReport slice_components(const GridDomain& X1, const GridDomain& X2, int slice);
// slice nearest to x1 = c
int slice_index(const GridDomain& g, double c);

struct Verdict {
  std::string kind;     // runge_pair | p_convex | tube
  std::string outcome;  // pass | fail | indeterminate
  nlohmann::json witness;
  std::vector<std::string> notes;
  // cells to highlight in overlays
  std::vector<std::size_t> witness_cells;
  nlohmann::json to_json() const;
};

struct CheckOptions {
  int threads = 1;
  double tol = -1;  // quasiconcavity tolerance; < 0 picks h/2
};

// Fails when some slice x1 = c has a bounded component of the complement of
// X1 lying inside X2. Components touching the window that lie inside X2 are
// re-examined on a doubled window when both domains carry CSG specs.
Verdict runge_pair_check(const GridDomain& X1, const GridDomain& X2, const CheckOptions& opt = {});

struct Interval {
  double lo = 0, hi = 0;  // open
  bool contains(double x) const { return x > lo && x < hi; }
};

// Product pair I_k x Xk_n: the verdict of the spatial factor alone.
Verdict tube_check(const Interval& I1, const GridDomain& X1n, const Interval& I2, const GridDomain& X2n);
// I x Xn rasterized with the spacing of Xn, x1 over [x1lo, x1hi]
GridDomain product_domain(const Interval& I, const GridDomain& Xn, double x1lo, double x1hi);

struct QuasiconcaveResult {
  bool ok = true;
  int i = -1, j = -1, k = -1;  // violation: v_j < min(v_i, v_k) - tol
};
// Over the valid entries (all when valid is empty).
QuasiconcaveResult quasiconcave_1d(const std::vector<double>& values, const std::vector<bool>& valid = {},
                                   double tol = 0);

// Minimum principle for d_X on every characteristic slice x1 = c: per run of
// X-cells in d = 2, per connected slice region via a sublevel merge tree in
// d = 3.
Verdict p_convexity_check(const GridDomain& X, const CheckOptions& opt = {});

struct EscapeResult {
  bool escaped = false;
  std::vector<std::size_t> path;  // cell indices from x onwards
  nlohmann::json to_json(const GridDomain& g) const;
};
// Breadth-first search in the slice of x through X-cells outside K, until a
// cell within 2h of the complement or on the window boundary. Requires
// d_X(x) < dist(K, complement).
EscapeResult escape_path_check(const GridDomain& X, const std::vector<std::size_t>& K, std::size_t x);

}  // namespace ka
