#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <thread>

#include "error.hpp"

namespace ka {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cells of one slice (axis 0 fixed at fixed0) or of the whole grid
// (fixed0 < 0), with face neighbours along the free axes.
struct SliceView {
  const GridDomain& g;
  int fixed0;
  int first_free() const { return fixed0 >= 0 ? 1 : 0; }
  template <class F>
  void for_each(F f) const {
    int a0 = fixed0 >= 0 ? fixed0 : 0, b0 = fixed0 >= 0 ? fixed0 + 1 : g.n[0];
    for (int i = a0; i < b0; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k) f(g.index(i, j, k));
  }
  std::array<int, 3> coords(std::size_t q) const {
    int k = static_cast<int>(q % g.n[2]);
    int j = static_cast<int>((q / g.n[2]) % g.n[1]);
    int i = static_cast<int>(q / (static_cast<std::size_t>(g.n[2]) * g.n[1]));
    return {i, j, k};
  }
  bool on_boundary(std::size_t q) const {
    auto c = coords(q);
    for (int a = first_free(); a < g.dim; ++a)
      if (c[a] == 0 || c[a] == g.n[a] - 1) return true;
    return false;
  }
  template <class F>
  void neighbours(std::size_t q, F f) const {
    auto c = coords(q);
    for (int a = first_free(); a < g.dim; ++a)
      for (int s : {-1, 1}) {
        auto d = c;
        d[a] += s;
        if (d[a] < 0 || d[a] >= g.n[a]) continue;
        f(g.index(d[0], d[1], d[2]));
      }
  }
};

std::vector<SliceComponent> complement_components(const GridDomain& X1, const GridDomain& X2, int fixed0) {
  SliceView v{X1, fixed0};
  std::vector<SliceComponent> out;
  std::vector<std::uint8_t> seen(X1.size(), 0);
  v.for_each([&](std::size_t q) {
    if (X1.occ[q] || seen[q]) return;
    SliceComponent c;
    c.bounded = true;
    c.contained_in_X2 = true;
    std::deque<std::size_t> queue{q};
    seen[q] = 1;
    while (!queue.empty()) {
      std::size_t p = queue.front();
      queue.pop_front();
      c.cells.push_back(p);
      if (v.on_boundary(p)) c.bounded = false;
      if (!X2.occ[p]) c.contained_in_X2 = false;
      v.neighbours(p, [&](std::size_t r) {
        if (!X1.occ[r] && !seen[r]) {
          seen[r] = 1;
          queue.push_back(r);
        }
      });
    }
    std::sort(c.cells.begin(), c.cells.end());
    out.push_back(std::move(c));
  });
  return out;
}

void check_pair(const GridDomain& X1, const GridDomain& X2) {
  require(X1.same_grid(X2), ErrorCode::invalid_argument, "X1 and X2 must share window and spacing");
  require(X1.subset_of(X2), ErrorCode::precondition, "X1 is not contained in X2 cell-wise");
}

// run f(slice) for all slices, threads striding over slice indices
template <class R, class F>
std::vector<R> per_slice(int nslices, int threads, F f) {
  std::vector<R> res(static_cast<std::size_t>(nslices));
  int nt = std::max(1, std::min(threads, nslices));
  if (nt == 1) {
    for (int s = 0; s < nslices; ++s) res[static_cast<std::size_t>(s)] = f(s);
    return res;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (int s = t; s < nslices; s += nt) res[static_cast<std::size_t>(s)] = f(s);
    });
  for (auto& th : pool) th.join();
  return res;
}

nlohmann::json cell_json(const GridDomain& g, std::size_t q) {
  SliceView v{g, -1};
  auto c = v.coords(q);
  nlohmann::json x = nlohmann::json::array();
  for (int a = 0; a < g.dim; ++a) x.push_back(g.coord(a, c[a]));
  return x;
}

nlohmann::json extent_json(const GridDomain& g, const std::vector<std::size_t>& cells) {
  SliceView v{g, -1};
  std::vector<double> lo(static_cast<std::size_t>(g.dim), kInf), hi(static_cast<std::size_t>(g.dim), -kInf);
  for (auto q : cells) {
    auto c = v.coords(q);
    for (int a = 0; a < g.dim; ++a) {
      lo[a] = std::min(lo[a], g.coord(a, c[a]));
      hi[a] = std::max(hi[a], g.coord(a, c[a]));
    }
  }
  return {{"lo", lo}, {"hi", hi}};
}

// window with the same node alignment, extents roughly doubled in the slice
// axes, and a single x1 node at c
Window doubled_slice_window(const GridDomain& g, double c) {
  Window w;
  w.lo.push_back(c);
  w.hi.push_back(c);
  for (int a = 1; a < g.dim; ++a) {
    int pad = (g.n[a] + 1) / 2;
    w.lo.push_back(g.coord(a, -pad));
    w.hi.push_back(g.coord(a, g.n[a] - 1 + pad));
  }
  return w;
}

}  // namespace

int slice_index(const GridDomain& g, double c) {
  int i = static_cast<int>(std::llround((c - g.lo[0]) / g.h));
  require(i >= 0 && i < g.n[0], ErrorCode::invalid_argument, "slice coordinate outside the window");
  return i;
}

SliceComponentReport slice_components(const GridDomain& X1, const GridDomain& X2, int slice) {
  check_pair(X1, X2);
  require(X1.dim >= 2, ErrorCode::invalid_argument, "slices need dimension >= 2");
  require(slice >= 0 && slice < X1.n[0], ErrorCode::invalid_argument, "slice index outside the window");
  SliceComponentReport r;
  r.slice = slice;
  r.c = X1.coord(0, slice);
  r.components = complement_components(X1, X2, slice);
  return r;
}

nlohmann::json SliceComponentReport::to_json(const GridDomain& g) const {
  nlohmann::json comps = nlohmann::json::array();
  for (auto& c : components)
    comps.push_back({{"cells", c.cells.size()},
                     {"bounded", c.bounded},
                     {"contained_in_X2", c.contained_in_X2},
                     {"extent", extent_json(g, c.cells)}});
  return {{"c", c}, {"components", comps}};
}

nlohmann::json Verdict::to_json() const {
  return {{"kind", kind}, {"outcome", outcome}, {"witness", witness}, {"notes", notes}};
}

Verdict runge_pair_check(const GridDomain& X1, const GridDomain& X2, const CheckOptions& opt) {
  check_pair(X1, X2);
  require(X1.dim >= 2, ErrorCode::invalid_argument, "Runge pairs need dimension >= 2");
  struct SliceResult {
    std::vector<SliceComponent> failing;
    bool window_limited = false;
  };
  auto res = per_slice<SliceResult>(X1.n[0], opt.threads, [&](int s) {
    SliceResult r;
    for (auto& c : complement_components(X1, X2, s)) {
      if (!c.contained_in_X2) continue;
      if (c.bounded)
        r.failing.push_back(std::move(c));
      else
        r.window_limited = true;
    }
    return r;
  });
  Verdict v;
  v.kind = "runge_pair";
  // witness: largest failing component, then smallest |c|, then smallest c
  int best = -1;
  std::size_t best_comp = 0;
  auto better = [&](int s, std::size_t size) {
    if (best < 0) return true;
    std::size_t bsize = res[best].failing[best_comp].cells.size();
    if (size != bsize) return size > bsize;
    double c = std::fabs(X1.coord(0, s)), bc = std::fabs(X1.coord(0, best));
    if (std::fabs(c - bc) > 1e-9 * X1.h) return c < bc;
    return false;
  };
  int nfail = 0;
  for (int s = 0; s < X1.n[0]; ++s)
    for (std::size_t k = 0; k < res[s].failing.size(); ++k) {
      ++nfail;
      if (better(s, res[s].failing[k].cells.size())) {
        best = s;
        best_comp = k;
      }
    }
  if (best >= 0) {
    const auto& comp = res[best].failing[best_comp];
    v.outcome = "fail";
    v.witness = {{"slice", X1.coord(0, best)},
                 {"component", best_comp},
                 {"cells", comp.cells.size()},
                 {"extent", extent_json(X1, comp.cells)},
                 {"failing_components", nfail}};
    v.witness_cells = comp.cells;
    return v;
  }
  v.outcome = "pass";
  std::vector<int> limited;
  for (int s = 0; s < X1.n[0]; ++s)
    if (res[s].window_limited) limited.push_back(s);
  if (limited.empty()) return v;
  if (!X1.shape || !X2.shape) {
    v.notes.push_back("complement components inside X2 touch the window; treated as unbounded (mask input)");
    return v;
  }
  for (int s : limited) {
    double c = X1.coord(0, s);
    Window w = doubled_slice_window(X1, c);
    GridDomain Y1 = rasterize(*X1.shape, w, X1.h), Y2 = rasterize(*X2.shape, w, X2.h);
    for (auto& comp : complement_components(Y1, Y2, 0))
      if (comp.bounded && comp.contained_in_X2) {
        v.outcome = "indeterminate";
        v.witness = {{"slice", c},
                     {"cells", comp.cells.size()},
                     {"extent", extent_json(Y1, comp.cells)},
                     {"window", "doubled"}};
        v.notes.push_back("a complement component inside X2 is bounded only on the doubled window");
        return v;
      }
  }
  v.notes.push_back("window-touching complement components stay unbounded on the doubled window");
  return v;
}

GridDomain product_domain(const Interval& I, const GridDomain& Xn, double x1lo, double x1hi) {
  require(Xn.dim <= 2, ErrorCode::invalid_argument, "product domains have dimension at most 3");
  require(x1hi >= x1lo, ErrorCode::invalid_argument, "empty x1 range");
  GridDomain g;
  g.dim = Xn.dim + 1;
  g.h = Xn.h;
  g.n = {static_cast<int>(std::llround((x1hi - x1lo) / Xn.h)) + 1, Xn.n[0], Xn.dim > 1 ? Xn.n[1] : 1};
  g.lo = {x1lo, Xn.lo[0], Xn.lo[1]};
  g.occ.assign(g.size(), 0);
  for (int i = 0; i < g.n[0]; ++i) {
    if (!I.contains(g.coord(0, i))) continue;
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) g.occ[g.index(i, j, k)] = Xn.in(j, k);
  }
  g.source = "product";
  return g;
}

Verdict tube_check(const Interval& I1, const GridDomain& X1n, const Interval& I2, const GridDomain& X2n) {
  require(I1.lo < I1.hi && I2.lo < I2.hi, ErrorCode::invalid_argument, "intervals must be nonempty");
  require(I2.lo <= I1.lo && I1.hi <= I2.hi, ErrorCode::precondition, "I1 is not contained in I2");
  check_pair(X1n, X2n);
  Verdict v;
  v.kind = "tube";
  const SliceComponent* best = nullptr;
  bool limited = false;
  auto comps = complement_components(X1n, X2n, -1);
  for (auto& c : comps) {
    if (!c.contained_in_X2) continue;
    if (!c.bounded) {
      limited = true;
      continue;
    }
    if (!best || c.cells.size() > best->cells.size()) best = &c;
  }
  if (best) {
    v.outcome = "fail";
    v.witness = {{"cells", best->cells.size()}, {"extent", extent_json(X1n, best->cells)}};
    v.witness_cells = best->cells;
  } else {
    v.outcome = "pass";
    if (limited) v.notes.push_back("complement components inside X2 touch the window; treated as unbounded");
  }
  return v;
}

QuasiconcaveResult quasiconcave_1d(const std::vector<double>& values, const std::vector<bool>& valid, double tol) {
  require(valid.empty() || valid.size() == values.size(), ErrorCode::invalid_argument,
          "validity mask length does not match");
  std::vector<int> idx;
  for (std::size_t q = 0; q < values.size(); ++q)
    if (valid.empty() || valid[q]) idx.push_back(static_cast<int>(q));
  QuasiconcaveResult r;
  const std::size_t n = idx.size();
  if (n < 3) return r;
  // running argmax from the left and from the right (first occurrence)
  std::vector<int> left(n), right(n);
  left[0] = idx[0];
  for (std::size_t q = 1; q < n; ++q) left[q] = values[idx[q]] > values[left[q - 1]] ? idx[q] : left[q - 1];
  right[n - 1] = idx[n - 1];
  for (std::size_t q = n - 1; q-- > 0;)
    right[q] = values[idx[q]] >= values[right[q + 1]] ? idx[q] : right[q + 1];
  double deepest = 0;
  for (std::size_t q = 1; q + 1 < n; ++q) {
    double flank = std::min(values[left[q - 1]], values[right[q + 1]]);
    double depth = flank - values[idx[q]];
    if (depth > tol && depth > deepest) {
      deepest = depth;
      r = {false, left[q - 1], idx[q], right[q + 1]};
    }
  }
  return r;
}

Verdict p_convexity_check(const GridDomain& X, const CheckOptions& opt) {
  require(X.dim == 2 || X.dim == 3, ErrorCode::invalid_argument, "P-convexity checks need dimension 2 or 3");
  const double tol = opt.tol >= 0 ? opt.tol : X.h / 2;
  Verdict v;
  v.kind = "p_convex";
  auto df = distance_field(X, false);
  bool any_complement = std::any_of(df.d.begin(), df.d.end(), [](double d) { return std::isfinite(d); });
  if (!any_complement) {
    v.outcome = "pass";
    v.notes.push_back("no complement cell in the window; the distance function is infinite");
    return v;
  }
  struct Violation {
    bool found = false;
    double depth = 0;
    nlohmann::json witness;
    std::vector<std::size_t> cells;
  };
  auto res = per_slice<Violation>(X.n[0], opt.threads, [&](int s) {
    Violation best;
    SliceView view{X, s};
    if (X.dim == 2) {
      int j = 0;
      while (j < X.n[1]) {
        if (!X.in(s, j)) {
          ++j;
          continue;
        }
        int j0 = j;
        std::vector<double> vals;
        while (j < X.n[1] && X.in(s, j)) vals.push_back(df.at(s, j++));
        auto q = quasiconcave_1d(vals, {}, tol);
        if (q.ok) continue;
        double depth = std::min(vals[q.i], vals[q.k]) - vals[q.j];
        if (depth > best.depth) {
          best.found = true;
          best.depth = depth;
          best.witness = {{"slice", X.coord(0, s)},
                          {"triple", {X.coord(1, j0 + q.i), X.coord(1, j0 + q.j), X.coord(1, j0 + q.k)}},
                          {"values", {vals[q.i], vals[q.j], vals[q.k]}}};
          best.cells = {X.index(s, j0 + q.i), X.index(s, j0 + q.j), X.index(s, j0 + q.k)};
        }
      }
      return best;
    }
    // d = 3: sublevel components of d_X on the slice, merged in increasing
    // order; a component closed off from the region boundary whose minimum
    // lies more than tol below the merge level violates the principle
    std::vector<std::size_t> cells;
    view.for_each([&](std::size_t q) {
      if (X.occ[q]) cells.push_back(q);
    });
    std::sort(cells.begin(), cells.end(), [&](std::size_t a, std::size_t b) {
      return df.d[a] < df.d[b] || (df.d[a] == df.d[b] && a < b);
    });
    std::vector<std::size_t> parent(X.size());
    std::vector<std::uint8_t> added(X.size(), 0), touches(X.size(), 0);
    std::vector<std::size_t> minc(X.size());
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (auto q : cells) {
      const double t = df.d[q];
      bool edge = view.on_boundary(q);
      view.neighbours(q, [&](std::size_t r) {
        if (!X.occ[r]) edge = true;
      });
      parent[q] = q;
      minc[q] = q;
      touches[q] = edge;
      added[q] = 1;
      view.neighbours(q, [&](std::size_t r) {
        if (!added[r]) return;
        std::size_t a = find(r), b = find(q);
        if (a == b) return;
        double depth = t - df.d[minc[a]];
        if (!touches[a] && depth > tol && depth > best.depth) {
          best.found = true;
          best.depth = depth;
          best.witness = {{"slice", X.coord(0, s)}, {"minimum", cell_json(X, minc[a])}, {"level", t},
                          {"min_value", df.d[minc[a]]}};
          best.cells = {minc[a], q};
        }
        parent[a] = b;
        if (df.d[minc[a]] < df.d[minc[b]]) minc[b] = minc[a];
        touches[b] = touches[a] || touches[b];
      });
    }
    return best;
  });
  int best = -1;
  for (int s = 0; s < X.n[0]; ++s) {
    if (!res[s].found) continue;
    if (best < 0 || res[s].depth > res[best].depth + 1e-12 ||
        (std::fabs(res[s].depth - res[best].depth) <= 1e-12 &&
         std::fabs(X.coord(0, s)) < std::fabs(X.coord(0, best)) - 1e-9 * X.h))
      best = s;
  }
  if (best < 0) {
    v.outcome = "pass";
    return v;
  }
  v.outcome = "fail";
  v.witness = res[best].witness;
  v.witness["depth"] = res[best].depth;
  v.witness_cells = res[best].cells;
  return v;
}

nlohmann::json EscapeResult::to_json(const GridDomain& g) const {
  nlohmann::json p = nlohmann::json::array();
  for (auto q : path) p.push_back(cell_json(g, q));
  return {{"escaped", escaped}, {"path", p}};
}

EscapeResult escape_path_check(const GridDomain& X, const std::vector<std::size_t>& K, std::size_t x) {
  require(X.dim >= 2, ErrorCode::invalid_argument, "escape paths need dimension >= 2");
  require(x < X.size() && X.occ[x], ErrorCode::invalid_argument, "start cell must lie in X");
  std::vector<std::uint8_t> inK(X.size(), 0);
  for (auto q : K) {
    require(q < X.size() && X.occ[q], ErrorCode::invalid_argument, "K must consist of X-cells");
    inK[q] = 1;
  }
  require(!inK[x], ErrorCode::invalid_argument, "start cell lies in K");
  auto df = distance_field(X, false);
  double distK = kInf;
  for (auto q : K) distK = std::min(distK, df.d[q]);
  require(df.d[x] < distK, ErrorCode::precondition, "gate d_X(x) < dist(K, complement) does not hold");
  SliceView view{X, static_cast<int>(x / (static_cast<std::size_t>(X.n[1]) * X.n[2]))};
  auto goal = [&](std::size_t q) { return df.d[q] < 2 * X.h || view.on_boundary(q); };
  std::vector<std::size_t> parent(X.size(), X.size());
  std::deque<std::size_t> queue{x};
  parent[x] = x;
  EscapeResult r;
  while (!queue.empty()) {
    std::size_t p = queue.front();
    queue.pop_front();
    if (goal(p)) {
      r.escaped = true;
      for (std::size_t q = p;; q = parent[q]) {
        r.path.push_back(q);
        if (q == x) break;
      }
      std::reverse(r.path.begin(), r.path.end());
      return r;
    }
    view.neighbours(p, [&](std::size_t q) {
      if (X.occ[q] && !inK[q] && parent[q] == X.size()) {
        parent[q] = p;
        queue.push_back(q);
      }
    });
  }
  return r;
}

}  // namespace ka
