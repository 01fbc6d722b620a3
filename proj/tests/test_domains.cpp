#include <doctest.h>
#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "domains.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "image_io.hpp"

using namespace ka;
using nlohmann::json;

namespace {

GridDomain dom2(const json& shape, double h, double w = 2.0) {
  return rasterize(json{{"dim", 2}, {"window", {{"lo", {-w, -w}}, {"hi", {w, w}}}}, {"h", h}, {"shape", shape}});
}

GridDomain dom3(const json& shape, double h, double w = 1.0) {
  return rasterize(
      json{{"dim", 3}, {"window", {{"lo", {-w, -w, -w}}, {"hi", {w, w, w}}}}, {"h", h}, {"shape", shape}});
}

const json kPlane = {{"type", "all"}};
json ball(double x, double y, double r) { return {{"type", "ball"}, {"center", {x, y}}, {"radius", r}}; }
json punctured(double r = 0.05) { return {{"type", "difference"}, {"of", {kPlane, ball(0, 0, r)}}}; }
json halfplane(double n1, double n2) { return {{"type", "halfspace"}, {"normal", {n1, n2}}, {"offset", 0}}; }

std::size_t cell(const GridDomain& g, double x1, double x2) {
  return g.index(static_cast<int>(std::llround((x1 - g.lo[0]) / g.h)),
                 static_cast<int>(std::llround((x2 - g.lo[1]) / g.h)));
}

// O(n^2) distance to complement cells
std::vector<double> brute_distance(const GridDomain& g) {
  std::vector<double> d(g.size(), std::numeric_limits<double>::infinity());
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k)
        for (int a = 0; a < g.n[0]; ++a)
          for (int b = 0; b < g.n[1]; ++b)
            for (int c = 0; c < g.n[2]; ++c) {
              if (g.in(a, b, c)) continue;
              double s = std::hypot(std::hypot(double(i - a), double(j - b)), double(k - c)) * g.h;
              auto& t = d[g.index(i, j, k)];
              t = std::min(t, s);
            }
  return d;
}

GridDomain random_mask(std::mt19937_64& rng, int dim, int n, double p) {
  GridDomain g;
  g.dim = dim;
  g.h = 0.5;
  g.n = {n, dim > 1 ? n : 1, dim > 2 ? n : 1};
  g.lo = {0, 0, 0};
  std::bernoulli_distribution B(p);
  for (std::size_t q = 0; q < g.size(); ++q) g.occ.push_back(B(rng));
  return g;
}

// exists a subinterval [a, b] of valid entries whose interior minimum lies
// more than tol below the smaller endpoint value
bool brute_violation(const std::vector<double>& v, const std::vector<bool>& valid, double tol) {
  std::vector<double> w;
  for (std::size_t q = 0; q < v.size(); ++q)
    if (valid[q]) w.push_back(v[q]);
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = a + 2; b < w.size(); ++b) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t j = a + 1; j < b; ++j) m = std::min(m, w[j]);
      if (m < std::min(w[a], w[b]) - tol) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("rasterize primitives") {
  auto disk = dom2(ball(0, 0, 1), 0.1);
  CHECK(disk.n[0] == 41);
  CHECK(disk.occ[cell(disk, 0, 0)]);
  CHECK(disk.occ[cell(disk, 0.9, 0)]);
  CHECK_FALSE(disk.occ[cell(disk, 1.0, 0)]);  // open ball
  CHECK_FALSE(disk.occ[cell(disk, 0.8, 0.7)]);
  std::size_t lattice = 0;
  for (int a = -10; a <= 10; ++a)
    for (int b = -10; b <= 10; ++b) lattice += a * a + b * b < 100;
  CHECK(disk.count() == lattice);

  auto pp = dom2(punctured(), 0.1);
  CHECK(pp.count() == pp.size() - 1);
  CHECK_FALSE(pp.occ[cell(pp, 0, 0)]);

  auto none = rasterize(json{{"dim", 2}, {"window", {{"lo", {0, 0}}, {"hi", {1, 1}}}}, {"h", 0.25}});
  CHECK(none.count() == 0);
  CHECK(none.size() == 25);

  // a point removes its own cell
  auto dot = dom2({{"type", "difference"}, {"of", {kPlane, {{"type", "point"}, {"at", {0.5, -0.5}}}}}}, 0.25);
  CHECK(dot.count() == dot.size() - 1);
  CHECK_FALSE(dot.occ[cell(dot, 0.5, -0.5)]);

  auto hp = dom2(halfplane(0, 1), 0.5);
  CHECK_FALSE(hp.occ[cell(hp, 0, 0)]);
  CHECK(hp.occ[cell(hp, 0, 0.5)]);

  auto box = dom2({{"type", "intersection"}, {"of", {ball(0, 0, 1.5), {{"type", "rect"}, {"lo", {-1, -1}}, {"hi", {1, 1}}}}}}, 0.5);
  CHECK(box.count() == 9);
  auto uni = dom2({{"type", "union"}, {"of", {ball(-1, 0, 0.1), ball(1, 0, 0.1)}}}, 0.5);
  CHECK(uni.count() == 2);
}

TEST_CASE("malformed domain specs are rejected") {
  CHECK_THROWS_AS(rasterize_text("{not json"), Error);
  CHECK_THROWS_AS(rasterize_text(R"({"dim": 2, "window": {"lo": [0,0], "hi": [1,1]}, "h": 0.1,
                                     "shape": {"type": "blob"}})"),
                  Error);
  CHECK_THROWS_AS(rasterize_text(R"({"dim": 2, "window": {"lo": [0,0], "hi": [1,1]}, "h": 0.1,
                                     "shape": {"type": "ball", "center": [0]}})"),
                  Error);
  CHECK_THROWS_AS(rasterize_text(R"({"dim": 2, "window": {"lo": [0,0], "hi": [1,1]}, "h": -1})"), Error);
  CHECK_THROWS_AS(rasterize_text(R"({"dim": 2, "window": {"lo": [1,0], "hi": [0,1]}, "h": 0.1})"), Error);
  CHECK_THROWS_AS(rasterize_text(R"({"dim": 4, "window": {"lo": [0,0], "hi": [1,1]}, "h": 0.1})"), Error);
  try {
    rasterize_text(R"({"dim": 2, "window": {"lo": [0,0], "hi": [1,1]}, "h": 0.1, "shape": {"type": "blob"}})");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
  }
}

TEST_CASE("distance transform equals brute force") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    int dim = 1 + t % 3;
    auto g = random_mask(rng, dim, dim == 3 ? 7 : 13, 0.8);
    auto df = distance_field(g);
    auto bf = brute_distance(g);
    for (std::size_t q = 0; q < g.size(); ++q) {
      if (std::isinf(bf[q]))
        CHECK(std::isinf(df.d[q]));
      else
        CHECK(df.d[q] == doctest::Approx(bf[q]).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance field examples") {
  auto hp = dom2(halfplane(0, 1), 0.1);
  auto d = distance_field(hp);
  for (double y : {0.1, 0.5, 1.3, 2.0}) CHECK(std::fabs(d.d[cell(hp, 0, y)] - y) <= 0.1);

  auto pp = dom2(punctured(), 0.1);
  auto dp = distance_field(pp);
  for (auto [x, y] : std::vector<std::pair<double, double>>{{0.3, 0.4}, {-1, 1.5}, {2, -2}})
    CHECK(std::fabs(dp.d[cell(pp, x, y)] - std::hypot(x, y)) <= 0.1 + 0.05);

  auto full = dom2(kPlane, 0.25);
  auto inf = distance_field(full, false);
  for (double v : inf.d) CHECK(std::isinf(v));
  auto ext = distance_field(full, true);
  CHECK(ext.d[cell(full, 0, 0)] == doctest::Approx(2.25));
  CHECK(ext.d[cell(full, 2, 0)] == doctest::Approx(0.25));
}

TEST_CASE("distance is monotone under inclusion") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    auto X = random_mask(rng, 2, 20, 0.85);
    auto Y = X;
    std::bernoulli_distribution B(0.3);
    for (auto& c : Y.occ)
      if (!c && B(rng)) c = 1;
    auto dx = distance_field(X), dy = distance_field(Y);
    for (std::size_t q = 0; q < X.size(); ++q) CHECK(dx.d[q] <= dy.d[q]);
  }
}

TEST_CASE("slice components") {
  // 5 x 5 toy grid: plane minus the segment x1 = 0, |x2| <= 1
  json X1 = {{"type", "difference"}, {"of", {kPlane, {{"type", "rect"}, {"lo", {0, -1}}, {"hi", {0, 1}}}}}};
  auto A = dom2(X1, 1.0), B = dom2(kPlane, 1.0);
  REQUIRE(A.n[0] == 5);
  CHECK(A.count() == 22);
  auto r = slice_components(A, B, slice_index(A, 0.0));
  REQUIRE(r.components.size() == 1);
  CHECK(r.components[0].cells.size() == 3);
  CHECK(r.components[0].bounded);
  CHECK(r.components[0].contained_in_X2);
  CHECK(slice_components(A, B, slice_index(A, 1.0)).components.empty());
  CHECK_THROWS_AS(slice_components(B, A, 2), Error);

  auto H = dom2(halfplane(0, 1), 0.5);
  auto P = dom2(kPlane, 0.5);
  for (double c : {-2.0, 0.0, 1.5}) {
    auto s = slice_components(H, P, slice_index(H, c));
    REQUIRE(s.components.size() == 1);
    CHECK_FALSE(s.components[0].bounded);
  }
}

TEST_CASE("Runge pair verdicts") {
  for (double h : {0.1, 0.05}) {
    auto X1 = dom2(punctured(), h), X2 = dom2(kPlane, h);
    auto v = runge_pair_check(X1, X2);
    CHECK(v.outcome == "fail");
    CHECK(std::fabs(v.witness["slice"].get<double>()) < 1e-12);
    CHECK_FALSE(v.witness_cells.empty());

    auto H = dom2(halfplane(0, 1), h);
    auto ok = runge_pair_check(H, X2);
    CHECK(ok.outcome == "pass");
    CHECK(runge_pair_check(X1, X1).outcome == "pass");
  }
  // threads give the same verdict
  auto X1 = dom2(punctured(0.3), 0.1), X2 = dom2(kPlane, 0.1);
  CheckOptions four;
  four.threads = 4;
  CHECK(runge_pair_check(X1, X2, four).to_json() == runge_pair_check(X1, X2).to_json());
}

TEST_CASE("window-limited components are re-examined on a doubled window") {
  // the removed box pokes out of the window at the top but ends at x2 = 3
  json X1 = {{"type", "difference"}, {"of", {kPlane, {{"type", "rect"}, {"lo", {-0.5, 1.5}}, {"hi", {0.5, 3}}}}}};
  auto A = dom2(X1, 0.25), P = dom2(kPlane, 0.25);
  auto v = runge_pair_check(A, P);
  CHECK(v.outcome == "indeterminate");
  CHECK(v.witness["window"] == "doubled");

  // a mask copy has no spec to enlarge
  auto M = A;
  M.shape.reset();
  auto PM = P;
  PM.shape.reset();
  auto vm = runge_pair_check(M, PM);
  CHECK(vm.outcome == "pass");
  CHECK_FALSE(vm.notes.empty());
}

TEST_CASE("enlarging X2 never turns a fail into a pass") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-1.5, 1.5), R(0.05, 0.5);
  for (int t = 0; t < 10; ++t) {
    json holes = json::array();
    for (int q = 0; q < 3; ++q) holes.push_back(ball(U(rng), U(rng), R(rng)));
    json X1 = {{"type", "difference"}, {"of", {kPlane, {{"type", "union"}, {"of", holes}}}}};
    json X2 = {{"type", "union"}, {"of", {X1, ball(U(rng), U(rng), R(rng))}}};
    auto A = dom2(X1, 0.1), B = dom2(X2, 0.1), C = dom2(kPlane, 0.1);
    auto vb = runge_pair_check(A, B), vc = runge_pair_check(A, C);
    if (vb.outcome == "fail") CHECK(vc.outcome == "fail");
    CHECK(vc.outcome == "fail");
  }
}

TEST_CASE("tube check") {
  json line = {{"type", "all"}};
  auto L = rasterize(json{{"dim", 1}, {"window", {{"lo", {-2}}, {"hi", {2}}}}, {"h", 0.1}, {"shape", line}});
  auto Lp = rasterize(json{{"dim", 1},
                           {"window", {{"lo", {-2}}, {"hi", {2}}}},
                           {"h", 0.1},
                           {"shape", {{"type", "difference"}, {"of", {line, {{"type", "point"}, {"at", {0.3}}}}}}}});
  Interval I{-1, 1};
  auto f = tube_check(I, Lp, I, L);
  CHECK(f.outcome == "fail");
  CHECK(f.witness_cells.size() == 1);
  CHECK(tube_check(I, L, I, L).outcome == "pass");
  CHECK_THROWS_AS(tube_check(Interval{-2, 1}, L, I, L), Error);
  CHECK_THROWS_AS(tube_check(I, L, I, Lp), Error);
}

TEST_CASE("tube check agrees with the product-domain checker") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> U(-1.8, 1.8), W(0.05, 0.6);
  int fails = 0;
  for (int t = 0; t < 10; ++t) {
    // X1n: line minus random closed intervals; X2n: X1n plus some of them back
    json cuts = json::array(), back = json::array();
    for (int q = 0; q < 3; ++q) {
      double c = U(rng), w = W(rng);
      json r = {{"type", "rect"}, {"lo", {c - w}}, {"hi", {c + w}}};
      cuts.push_back(r);
      if (q == t % 3) back.push_back({{"type", "rect"}, {"lo", {c - w - 0.3}}, {"hi", {c + w + 0.3}}});
    }
    json x1n = {{"type", "difference"}, {"of", {kPlane, {{"type", "union"}, {"of", cuts}}}}};
    json x2n = t % 2 ? json{{"type", "union"}, {"of", {x1n, back[0]}}} : kPlane;
    auto spec = [](const json& s) {
      return rasterize(json{{"dim", 1}, {"window", {{"lo", {-2}}, {"hi", {2}}}}, {"h", 0.05}, {"shape", s}});
    };
    auto A = spec(x1n), B = spec(x2n);
    double a = std::uniform_real_distribution<double>(-1.5, -0.5)(rng), b = std::uniform_real_distribution<double>(0.5, 1.5)(rng);
    Interval I1{a, b}, I2{a - 0.2, b + 0.2};
    auto tv = tube_check(I1, A, I2, B);
    auto P1 = product_domain(I1, A, -2, 2), P2 = product_domain(I2, B, -2, 2);
    auto rv = runge_pair_check(P1, P2);
    INFO("family " << t);
    CHECK(tv.outcome == rv.outcome);
    fails += tv.outcome == "fail";
  }
  CHECK(fails > 0);
  CHECK(fails < 10);
}

TEST_CASE("quasiconcave_1d examples") {
  CHECK(quasiconcave_1d({1, 2, 3, 4}).ok);
  CHECK(quasiconcave_1d({4, 3, 3, 1}).ok);
  CHECK(quasiconcave_1d({1, 3, 5, 2, 0}).ok);
  auto r = quasiconcave_1d({2, 1, 2});
  CHECK_FALSE(r.ok);
  CHECK(r.i == 0);
  CHECK(r.j == 1);
  CHECK(r.k == 2);
  CHECK(quasiconcave_1d({2, 1.8, 2}, {}, 0.5).ok);
  // masked entries are skipped
  CHECK(quasiconcave_1d({2, 0, 2}, {true, false, true}).ok);
  CHECK_FALSE(quasiconcave_1d({3, 5, 1, 9, 4}, {true, false, true, true, false}).ok);
}

TEST_CASE("quasiconcave_1d matches subinterval enumeration") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> len(0, 12), val(0, 6), coin(0, 4);
  for (int t = 0; t < 1000; ++t) {
    int n = len(rng);
    std::vector<double> v;
    std::vector<bool> valid;
    for (int q = 0; q < n; ++q) {
      v.push_back(val(rng) * 0.5);
      valid.push_back(coin(rng) != 0);
    }
    double tol = t % 2 ? 0.0 : 0.5;
    auto r = quasiconcave_1d(v, valid, tol);
    CHECK(r.ok == !brute_violation(v, valid, tol));
    if (!r.ok) {
      CHECK(r.i < r.j);
      CHECK(r.j < r.k);
      CHECK(v[r.j] < std::min(v[r.i], v[r.k]) - tol);
    }
  }
}

TEST_CASE("P-convexity verdicts in the plane") {
  for (double h : {0.1, 0.05}) {
    auto pp = p_convexity_check(dom2(punctured(), h));
    CHECK(pp.outcome == "fail");
    double c = pp.witness["slice"];
    CHECK(c != 0.0);
    CHECK(std::fabs(c) <= 2 * h);
    auto tri = pp.witness["triple"];
    CHECK(tri[0].get<double>() < tri[1].get<double>());
    CHECK(std::fabs(tri[1].get<double>()) <= h);

    CHECK(p_convexity_check(dom2(halfplane(0, 1), h)).outcome == "pass");
    CHECK(p_convexity_check(dom2(halfplane(1, 0), h)).outcome == "pass");
    CHECK(p_convexity_check(dom2(ball(0.2, -0.1, 1.3), h)).outcome == "pass");
    CHECK(p_convexity_check(dom2({{"type", "rect"}, {"lo", {-1, -0.5}}, {"hi", {1.5, 1}}}, h)).outcome == "pass");
    CHECK(p_convexity_check(dom2(halfplane(1, 1), h)).outcome == "pass");
    CHECK(p_convexity_check(dom2(kPlane, h)).outcome == "pass");
  }
}

TEST_CASE("P-convexity verdicts in space") {
  json all = {{"type", "all"}};
  json pt = {{"type", "difference"}, {"of", {all, {{"type", "ball"}, {"center", {0, 0, 0}}, {"radius", 0.05}}}}};
  auto v = p_convexity_check(dom3(pt, 0.1));
  CHECK(v.outcome == "fail");
  CHECK(v.witness.contains("minimum"));
  CHECK(p_convexity_check(dom3({{"type", "ball"}, {"center", {0, 0, 0}}, {"radius", 0.8}}, 0.1)).outcome == "pass");
  CHECK(p_convexity_check(dom3({{"type", "halfspace"}, {"normal", {0, 1, 1}}, {"offset", 0.2}}, 0.1)).outcome ==
        "pass");
}

TEST_CASE("escape paths") {
  const double h = 0.05;
  // half-plane, K a small disk, start below it
  auto H = dom2(halfplane(0, 1), h);
  std::vector<std::size_t> K;
  for (std::size_t q = 0; q < H.size(); ++q) {
    int i = static_cast<int>(q / H.n[1]), j = static_cast<int>(q % H.n[1]);
    if (std::hypot(H.coord(0, i), H.coord(1, j) - 1.0) < 0.2) K.push_back(q);
  }
  auto e = escape_path_check(H, K, cell(H, 0, 0.5));
  CHECK(e.escaped);
  REQUIRE_FALSE(e.path.empty());
  auto df = distance_field(H);
  CHECK(df.d[e.path.back()] < 2 * h);
  CHECK(e.path.front() == cell(H, 0, 0.5));

  // punctured plane, annulus K cutting the slice x1 = 0.25 above and below
  auto P = dom2(punctured(), h);
  std::vector<std::size_t> A;
  for (std::size_t q = 0; q < P.size(); ++q) {
    int i = static_cast<int>(q / P.n[1]), j = static_cast<int>(q % P.n[1]);
    double r = std::hypot(P.coord(0, i), P.coord(1, j));
    if (r > 0.5 && r < 0.7) A.push_back(q);
  }
  auto b = escape_path_check(P, A, cell(P, 0.25, 0.1));
  CHECK_FALSE(b.escaped);
  CHECK(escape_path_check(P, {}, cell(P, 0.25, 0.1)).escaped);
  // the gate d_X(x) < dist(K, complement) is enforced
  CHECK_THROWS_AS(escape_path_check(P, A, cell(P, 1.5, 0.1)), Error);
}

TEST_CASE("PGM and PNG masks") {
  auto dir = std::filesystem::temp_directory_path() / "ka_domains_test";
  std::filesystem::create_directories(dir);
  auto pp = dom2(punctured(0.3), 0.1);
  auto v = runge_pair_check(pp, dom2(kPlane, 0.1));
  auto marked = overlay(pp, v.witness_cells, slice_index(pp, 0.0));
  CHECK(marked.width == 41);
  CHECK(marked.pixels[20 * 41 + 20] == 255);  // witness cell at the origin
  CHECK(marked.pixels[0] == 200);
  auto img = overlay(pp);
  write_pgm((dir / "o.pgm").string(), img);
  auto back = read_pgm((dir / "o.pgm").string());
  CHECK(back.pixels == img.pixels);
  auto m = mask_domain(back, -2, -2, 0.1);
  CHECK(m.occ == pp.occ);

  // ASCII PGM with a comment, rows from the top
  {
    std::FILE* f = std::fopen((dir / "a.pgm").c_str(), "w");
    std::fputs("P2\n# mask\n3 2\n255\n0 255 255\n255 255 0\n", f);
    std::fclose(f);
  }
  auto a = mask_domain(read_image((dir / "a.pgm").string()), 0, 0, 1);
  CHECK_FALSE(a.in(0, 1));
  CHECK(a.in(1, 1));
  CHECK(a.in(0, 0));
  CHECK_FALSE(a.in(2, 0));

  png_image pi{};
  pi.version = PNG_IMAGE_VERSION;
  pi.width = static_cast<png_uint_32>(img.width);
  pi.height = static_cast<png_uint_32>(img.height);
  pi.format = PNG_FORMAT_GRAY;
  REQUIRE(png_image_write_to_file(&pi, (dir / "o.png").c_str(), 0, img.pixels.data(), 0, nullptr));
  auto pm = mask_domain(read_image((dir / "o.png").string()), -2, -2, 0.1);
  CHECK(pm.occ == pp.occ);
  CHECK(runge_pair_check(pm, dom2(kPlane, 0.1)).outcome == "fail");

  CHECK_THROWS_AS(read_pgm((dir / "missing.pgm").string()), Error);
  {
    std::FILE* f = std::fopen((dir / "bad.pgm").c_str(), "w");
    std::fputs("P7\n1 1\n255\n0\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_pgm((dir / "bad.pgm").string()), Error);
  std::filesystem::remove_all(dir);
}
