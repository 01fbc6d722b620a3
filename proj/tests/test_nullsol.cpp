#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "gen.hpp"
#include "hormander.hpp"
#include "puiseux.hpp"
#include "slab_solution.hpp"
#include "vseries.hpp"

using namespace ka;

namespace {

const cplx I(0, 1);

SlabDecomposition heat() { return slab_decompose(parse_poly("i*x1 + x2^2", 2)); }
SlabDecomposition schrodinger() { return slab_decompose(parse_poly("-x1 + x2^2", 2)); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// d1 f at x by central differences at steps h and h/2, Richardson-combined.
template <class Fn>
cplx richardson_d1(Fn f, double x, double h) {
  auto c = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  return (4.0 * c(h / 2) - c(h)) / 3.0;
}

}  // namespace

TEST_CASE("heat branch matches the principal square root of s/i") {
  PuiseuxBranch b(heat(), 0, 1.0, 300);
  CHECK(b.p() == 2);
  CHECK(std::abs(b.anchor() - 1.0) < 1e-14);
  for (double sig = -300; sig <= 300; sig += 0.37) {
    cplx s(sig, 1.0);
    cplx want = std::sqrt(-I * s);
    CHECK(std::abs(b.t(sig) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
  PuiseuxBranch other(heat(), 1, 1.0, 50);
  CHECK(std::abs(other.t(7.5) + std::sqrt(-I * cplx(7.5, 1.0))) < 1e-12 * 3);
}

TEST_CASE("Schrodinger branch is the principal square root of s") {
  PuiseuxBranch b(schrodinger(), 0, 2.0, 200);
  for (double sig = -200; sig <= 200; sig += 0.53) {
    cplx want = std::sqrt(cplx(sig, 2.0));
    CHECK(std::abs(b.t(sig) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("tracked roots satisfy the symbol at random nodes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-150, 150);
  for (auto dec : {heat(), schrodinger()}) {
    PuiseuxBranch b(dec, 0, 1.5, 150);
    for (int q = 0; q < 100; ++q) {
      double sig = U(rng);
      cplx s(sig, 1.5), t = b.t(sig);
      CHECK(std::abs(b.pencil().value(s, t)) <= 1e-10 * b.pencil().scale(s, t));
    }
    CHECK(b.track().max_residual() <= 1e-10);
  }
}

TEST_CASE("anchor roots are ordered by real part then imaginary part") {
  SymbolPencil pen(schrodinger());
  auto r = anchor_roots(pen, 2.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0].real() > r[1].real());
  CHECK(std::abs(r[0] - std::sqrt(cplx(0, 2.0))) < 1e-14);
}

TEST_CASE("root collision on the contour is refused") {
  // t^2 = s - i has a double root at the anchor s = i
  auto dec = slab_decompose(parse_poly("x2^2 - x1 + i", 2));
  CHECK_THROWS_AS(PuiseuxBranch(dec, 0, 1.0, 10), Error);
  auto bp = branch_points(dec);
  CHECK(bp.M == doctest::Approx(1.0));
  CHECK(bp.tau_min() == doctest::Approx(4.0));
}

TEST_CASE("contour parameters are checked") {
  ContourSpec cs;
  cs.r = 0.4;
  CHECK_THROWS_AS(HormanderV(heat(), cs), Error);
  cs.r = 1.0;
  CHECK_THROWS_AS(HormanderV(heat(), cs), Error);
  ContourSpec ok;
  HormanderV v(heat(), ok);
  CHECK(v.spec().tau >= 1.0);
  CHECK(v.spec().r == 0.75);
}

TEST_CASE("v matches the double series") {
  HormanderV v(heat());
  for (auto [x1, x2] : std::vector<std::pair<double, double>>{{-1, 0}, {-0.5, 0}, {-1, 1}, {-0.3, -0.5}, {-2, 2}, {-0.6, 1.5}}) {
    auto e = v.evaluate(x1, x2);
    cplx o = katest::heat_v_series(x1, x2, 0, 0, 0.75);
    INFO("x = (" << x1 << ", " << x2 << ")");
    CHECK(std::abs(e.value - o) <= std::max(e.error, 1e-12 * std::abs(o)));
    CHECK(std::abs(e.value - o) <= 1e-7 * std::max(1.0, std::abs(o)));
    CHECK(e.error <= 1e-6 * std::max(1.0, std::abs(o)));
  }
}

TEST_CASE("v is negligible for x1 > 0.2 and not at x1 = -1") {
  HormanderV v(heat());
  auto c = v.evaluate(-1.0, 0.0);
  CHECK(std::abs(c.value) > 100 * c.error);
  double vmax = std::abs(c.value);
  for (double x1 : {0.25, 0.5, 1.0})
    for (double x2 : {-2.0, -0.5, 0.0, 1.0, 2.0}) {
      auto e = v.evaluate(x1, x2);
      CHECK(std::abs(e.value) <= 1e-6 * vmax);
      auto d = v.evaluate(x1, x2, {0, 1});
      CHECK(std::abs(d.value) <= 1e-6 * vmax);
    }
}

TEST_CASE("v does not depend on tau") {
  ContourSpec a, b;
  a.tau = 1.0;
  b.tau = 2.0;
  HormanderV va(heat(), a), vb(heat(), b);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> X1(-2, -0.2), X2(-2, 2);
  std::vector<std::array<double, 2>> pts;
  for (int q = 0; q < 10; ++q) pts.push_back({X1(rng), X2(rng)});
  auto ea = va.evaluate(pts), eb = vb.evaluate(pts);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    INFO("point " << pts[q][0] << ", " << pts[q][1]);
    CHECK(std::abs(ea[q].value - eb[q].value) <= ea[q].error + eb[q].error + 1e-8 * std::abs(ea[q].value));
    CHECK(rel(ea[q].value, eb[q].value) <= 1e-8);
  }
}

TEST_CASE("alpha = 0 gives v itself") {
  HormanderV v(heat());
  std::vector<std::array<double, 2>> pts{{-1, 0.3}, {-0.4, -1}, {0.3, 0.2}};
  auto a = v.evaluate(pts), b = v.evaluate(pts, {0, 0});
  for (std::size_t q = 0; q < pts.size(); ++q) {
    CHECK(a[q].value == b[q].value);
    CHECK(a[q].error == b[q].error);
  }
}

TEST_CASE("d1 v agrees with finite differences") {
  HormanderV v(heat());
  auto f = [&](double x2) { return [&, x2](double x1) { return v.evaluate(x1, x2).value; }; };
  for (auto [x1, x2] : std::vector<std::pair<double, double>>{{-1, 0}, {-0.7, 0.4}, {-1.5, -1}, {-0.5, 1}, {-1.2, 0.8}}) {
    cplx fd = richardson_d1(f(x2), x1, 1e-3);
    cplx d1 = I * v.evaluate(x1, x2, {1, 0}).value;  // d1 = i D1
    INFO("x = (" << x1 << ", " << x2 << ")");
    CHECK(rel(d1, fd) <= 1e-4);
  }
}

TEST_CASE("v satisfies the heat equation through its derivatives") {
  HormanderV v(heat());
  // P(D) = i D1 + D2^2
  for (auto [x1, x2] : std::vector<std::pair<double, double>>{{-1, 0.5}, {-0.4, -1.2}, {-1.8, 1.9}}) {
    auto a = v.evaluate(x1, x2, {1, 0}), b = v.evaluate(x1, x2, {0, 2});
    cplx res = I * a.value + b.value;
    CHECK(std::abs(res) <= 10 * (a.error + b.error) + 1e-12 * std::abs(b.value));
  }
}

TEST_CASE("trace jets match the series") {
  HormanderV v(heat());
  for (double x1 : {-1.0, -0.5, -0.2}) {
    auto J = v.trace_jet(x1, 30, 1);
    for (int j = 0; j <= 1; ++j)
      for (int k : {0, 1, 2, 5, 10, 17, 24, 30}) {
        cplx o = katest::heat_v_series(x1, 0, k, j, 0.75);
        INFO("x1 = " << x1 << " k = " << k << " j = " << j);
        CHECK(rel(J[j][k].value, o) <= 1e-10);
        CHECK(std::abs(J[j][k].value - o) <= J[j][k].error + 1e-12 * std::abs(o));
      }
  }
}

TEST_CASE("parabolic and horizontal routes agree for low orders") {
  HormanderV v(heat());
  auto J = v.trace_jet(-0.8, 4, 1);
  for (int k = 0; k <= 4; ++k)
    for (int j = 0; j <= 1; ++j) {
      auto h = v.evaluate(-0.8, 0.0, {k, j});
      cplx d = std::pow(I, k) * h.value;
      CHECK(std::abs(d - J[j][k].value) <= h.error + J[j][k].error + 1e-11 * std::abs(d));
    }
}

TEST_CASE("Schrodinger null solution") {
  HormanderV v(schrodinger());
  auto e = v.evaluate(-1.0, 0.5);
  CHECK(std::abs(e.value) > 100 * e.error);
  CHECK(std::abs(v.evaluate(0.6, 0.5).value) <= 1e-6 * std::abs(e.value));
  // P(D) = -D1 + D2^2
  auto a = v.evaluate(-1.0, 0.5, {1, 0}), b = v.evaluate(-1.0, 0.5, {0, 2});
  CHECK(std::abs(b.value - a.value) <= 10 * (a.error + b.error) + 1e-12 * std::abs(b.value));
}

TEST_CASE("quadrature refinement stays within the error estimate") {
  HormanderV base(heat());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> X1(-2, 1), X2(-2, 2);
  std::vector<std::array<double, 2>> pts;
  for (int q = 0; q < 20; ++q) pts.push_back({X1(rng), X2(rng)});
  auto a = base.evaluate(pts);
  double sigma = base.info()["sigma_max"];
  ContourSpec fine;
  fine.sigma_max = 2 * sigma;
  fine.panel_phase = base.spec().panel_phase / 2;
  HormanderV refined(heat(), fine);
  auto b = refined.evaluate(pts);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    INFO("point " << pts[q][0] << ", " << pts[q][1]);
    CHECK(std::abs(a[q].value - b[q].value) <= a[q].error + b[q].error);
  }
}

TEST_CASE("finite-difference heat residual is second order") {
  HormanderV v(heat());
  auto P = parse_poly("i*x1 + x2^2", 2);
  double res[2];
  for (int q = 0; q < 2; ++q) {
    double h = q ? 0.0125 : 0.025;
    auto f = v.sample({-1.5, -0.5, -0.5, 0.5, h});
    auto r = fd_residual(P, f);
    res[q] = r.max_abs() / f.max_abs();
  }
  double order = std::log2(res[0] / res[1]);
  CHECK(order >= 1.5);
  CHECK(res[1] < res[0]);
}

TEST_CASE("fd residual of an exact solution vanishes to rounding") {
  // i D1 + D2^2 = d1 - d2^2, and x2^2 + 2 x1 is a heat solution
  Field f;
  f.grid = {-1, 1, -1, 1, 0.1};
  for (int i = 0; i < f.grid.n1(); ++i)
    for (int j = 0; j < f.grid.n2(); ++j) {
      double x1 = f.grid.x1(i), x2 = f.grid.x2(j);
      f.value.push_back(x2 * x2 + 2.0 * x1);
      f.error.push_back(0);
    }
  auto r = fd_residual(parse_poly("i*x1 + x2^2", 2), f);
  CHECK(r.max_abs() < 1e-10);
}

TEST_CASE("support report classification") {
  Field z;
  z.grid = {-1, 1, -1, 1, 0.5};
  z.value.assign(25, 0.0);
  z.error.assign(25, 0.0);
  auto rz = support_report(z, 1e-3);
  for (auto& c : rz.columns) CHECK(c.label == "negligible");
  CHECK_FALSE(rz.slab_lo.has_value());

  Field b = z;
  for (int j = 0; j < 5; ++j) {
    b.value[b.index(1, j)] = 1.0;
    b.value[b.index(2, j)] = 2.0;
  }
  auto rb = support_report(b, 1e-3);
  REQUIRE(rb.slab_lo.has_value());
  CHECK(*rb.slab_lo == doctest::Approx(-0.5));
  CHECK(*rb.slab_hi == doctest::Approx(0.0));
  CHECK(rb.column(-0.5).label == "significant");
  CHECK(rb.column(1.0).label == "negligible");

  Field s = b;
  s.value[s.index(4, 0)] = 1.5e-3;
  s.error[s.index(4, 0)] = 1e-3;
  CHECK(support_report(s, 1e-3).column(1.0).label == "indeterminate");
}

TEST_CASE("slab solution preconditions") {
  SlabSpec sp;
  sp.eps = 1.0;
  CHECK_THROWS_AS(slab_solution(heat(), sp), Error);
  sp.eps = 1.5;
  CHECK_THROWS_AS(slab_solution(heat(), sp), Error);
  SlabSpec bad_rho;
  bad_rho.rho = 2.5;
  CHECK_THROWS_AS(slab_solution(heat(), bad_rho), Error);
}

TEST_CASE("slab solution on a small grid") {
  SlabSpec sp;
  sp.n = 40;
  sp.grid = {-1.6, 0.4, -0.1, 0.1, 0.2};
  auto run = slab_solution(heat(), sp);
  const auto& rep = run.support;
  for (auto& c : rep.columns)
    if (c.x1 > 0.05 || c.x1 < -1.3) CHECK(c.label == "negligible");
  CHECK(rep.column(-0.6).label == "significant");
  CHECK(run.strip_max_diff <= 1e-3 * run.strip_max_v);
  CHECK(run.strip_max_v > 0);

  // traces of u reproduce g * trace of v
  GevreyCutoff g(slab_cutoff_spec(sp.a, sp.eps, sp.rho));
  for (double x1 : {-1.17, -1.0, -0.6, -0.3, -0.15}) {
    auto J = run.v->trace_jet(x1, 0, 1);
    for (int s = 0; s <= 1; ++s) {
      auto u = run.solution->trace(s).evaluate(std::span<const double>(&x1, 1));
      cplx want = g.value(x1) * J[s][0].value;
      CHECK(std::abs(u.value - want) <= u.error + J[s][0].error + 1e-12 * std::abs(want));
    }
  }
  auto js = run.summary();
  CHECK(js.contains("degraded_confidence"));
  CHECK(js["support"]["columns"].size() == rep.columns.size());
}

TEST_CASE("tail bound does not grow with the truncation order") {
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 10; n <= 200; n += 10) {
    double t = convergence_tail_bound(n, 2.0, 3.0, 0.2, 1.5, 0.5, 2, 1.0).value;
    CHECK(t <= prev);
    prev = t;
  }
}
