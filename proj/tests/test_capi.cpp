// Exercises the library through the public C header only.
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>

#include <json.hpp>

#include "kernapprox/kernapprox.h"
#include "vseries.hpp"

using nlohmann::json;

namespace {

// takes ownership of a returned string
std::string take(char* s) {
  std::string out = s ? s : "";
  ka_string_free(s);
  return out;
}

const char* kPunctured =
    R"({"dim":2,"window":{"lo":[-2,-2],"hi":[2,2]},"h":0.1,
        "shape":{"type":"difference","of":[{"type":"all"},{"type":"ball","center":[0,0],"radius":0.3}]}})";
const char* kPlane = R"({"dim":2,"window":{"lo":[-2,-2],"hi":[2,2]},"h":0.1,"shape":{"type":"all"}})";
const char* kHalf =
    R"({"dim":2,"window":{"lo":[-2,-2],"hi":[2,2]},"h":0.1,"shape":{"type":"halfspace","normal":[0,1],"offset":0}})";

struct Heat {
  ka_poly* p = nullptr;
  ka_decomposition* dec = nullptr;
  Heat() {
    REQUIRE(ka_poly_preset("heat", &p) == KA_OK);
    REQUIRE(ka_decompose(p, &dec) == KA_OK);
  }
  ~Heat() {
    ka_decomposition_free(dec);
    ka_poly_free(p);
  }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(ka_version()) == "0.1.0");
  CHECK(std::string(ka_status_name(KA_OK)) == "ok");
  CHECK(std::string(ka_status_name(KA_ERR_PRECONDITION)) == "precondition");
}

TEST_CASE("errors come back as status codes with a message") {
  ka_poly* p = nullptr;
  CHECK(ka_poly_parse("x1 + * x2", 2, KA_MODE_EXACT, &p) == KA_ERR_PARSE);
  CHECK(p == nullptr);
  CHECK(std::string(ka_last_error()).find("unexpected") != std::string::npos);
  CHECK(ka_poly_parse(nullptr, 2, KA_MODE_EXACT, &p) == KA_ERR_INVALID_ARGUMENT);
  CHECK(ka_poly_preset("wave", &p) == KA_ERR_INVALID_ARGUMENT);

  REQUIRE(ka_poly_parse("x1*x2", 0, KA_MODE_EXACT, &p) == KA_OK);
  CHECK(ka_poly_dim(p) == 2);
  ka_decomposition* dec = nullptr;
  CHECK(ka_decompose(p, &dec) != KA_OK);
  CHECK(dec == nullptr);
  ka_poly_free(p);
}

TEST_CASE("the error message is per thread") {
  ka_poly* p = nullptr;
  REQUIRE(ka_poly_parse("x1 +", 1, KA_MODE_EXACT, &p) != KA_OK);
  std::string mine = ka_last_error();
  std::thread t([] {
    ka_domain* X = nullptr;
    ka_domain_from_json("{", &X);
  });
  t.join();
  CHECK(std::string(ka_last_error()) == mine);
}

TEST_CASE("hypotheses of the presets") {
  for (const char* name : {"heat", "schrodinger"}) {
    ka_poly* p = nullptr;
    REQUIRE(ka_poly_preset(name, &p) == KA_OK);
    char* js = nullptr;
    int ok = -1;
    REQUIRE(ka_poly_hypotheses(p, 1, &js, &ok) == KA_OK);
    CHECK(ok == 1);
    json j = json::parse(take(js));
    CHECK(j["gamma_exact"] == "1/2");
    ka_poly_free(p);
  }
  ka_poly* p = nullptr;
  REQUIRE(ka_poly_parse("x1^2 + x2^2", 2, KA_MODE_EXACT, &p) == KA_OK);
  int ok = -1;
  REQUIRE(ka_poly_hypotheses(p, 1, nullptr, &ok) == KA_OK);
  CHECK(ok == 0);
  ka_poly_free(p);
}

TEST_CASE("Cauchy problem through the C interface") {
  Heat H;
  CHECK(ka_decomposition_order(H.dec) == 2);
  const char* data[] = {"0", "x1"};
  ka_cauchy_solution* sol = nullptr;
  REQUIRE(ka_cauchy_solve(H.dec, data, 2, 20, &sol) == KA_OK);
  CHECK(take([&] {
          char* s = nullptr;
          REQUIRE(ka_cauchy_polynomial(sol, &s) == KA_OK);
          return s;
        }()) == "1/6*i*x2^3 + i*x1*x2");
  double x1 = 0.3, re = 0, im = 0, err = 0;
  REQUIRE(ka_cauchy_eval(sol, &x1, 0.7, &re, &im, &err) == KA_OK);
  CHECK(re == doctest::Approx(0.0));
  CHECK(im == doctest::Approx(0.3 * 0.7 + 0.343 / 6).epsilon(1e-14));
  for (int s = 0; s < 2; ++s) {
    int exact = -1;
    REQUIRE(ka_cauchy_verify(sol, s, &exact) == KA_OK);
    CHECK(exact == 1);
  }
  int exact = 0;
  CHECK(ka_cauchy_verify(sol, 2, &exact) == KA_ERR_INVALID_ARGUMENT);
  ka_cauchy_free(sol);

  const char* three[] = {"0", "0", "0"};
  CHECK(ka_cauchy_solve(H.dec, three, 3, 20, &sol) == KA_ERR_INVALID_ARGUMENT);
  const char* bad[] = {"x1 +"};
  CHECK(ka_cauchy_solve(H.dec, bad, 1, 20, &sol) == KA_ERR_PARSE);
}

TEST_CASE("exponential data do not terminate") {
  Heat H;
  const char* data[] = {"exp(i*x1)"};
  ka_cauchy_solution* sol = nullptr;
  REQUIRE(ka_cauchy_solve(H.dec, data, 1, 30, &sol) == KA_OK);
  char* s = nullptr;
  CHECK(ka_cauchy_polynomial(sol, &s) == KA_ERR_PRECONDITION);
  // u = exp(i x1) cosh(sqrt(i) x2): d1 u = d2^2 u, u(x1, 0) = exp(i x1), d2 u(x1, 0) = 0
  double x1 = 0.4, re = 0, im = 0;
  REQUIRE(ka_cauchy_eval(sol, &x1, 0.5, &re, &im, nullptr) == KA_OK);
  const std::complex<double> I(0, 1);
  auto expect = std::exp(I * 0.4) * std::cosh(std::sqrt(I) * 0.5);
  CHECK(std::abs(std::complex<double>(re, im) - expect) < 1e-12);
  ka_cauchy_free(sol);
}

TEST_CASE("null solution values and samples") {
  Heat H;
  ka_null_solution* v = nullptr;
  CHECK(ka_null_solution_new(H.dec, "{", &v) == KA_ERR_PARSE);
  REQUIRE(ka_null_solution_new(H.dec, R"({"r":0.75})", &v) == KA_OK);
  double re = 0, im = 0, err = 0;
  REQUIRE(ka_null_solution_eval(v, -0.5, 0.3, 0, 0, &re, &im, &err) == KA_OK);
  auto ref = katest::heat_v_series(-0.5, 0.3, 0, 0, 0.75);
  CHECK(std::abs(std::complex<double>(re, im) - ref) < 1e-8 * std::abs(ref) + err);
  REQUIRE(ka_null_solution_eval(v, 0.5, 0.3, 0, 0, &re, &im, &err) == KA_OK);
  CHECK(std::hypot(re, im) < 1e-8);
  CHECK(ka_null_solution_eval(v, 0.5, 0.3, -1, 0, &re, &im, &err) == KA_ERR_INVALID_ARGUMENT);

  char* csv = nullptr;
  char* sup = nullptr;
  REQUIRE(ka_null_solution_sample(v, "-1:1:-1:1:0.5", 1e-3, &csv, &sup) == KA_OK);
  std::string c = take(csv);
  CHECK(std::count(c.begin(), c.end(), '\n') == 26);
  CHECK(c.rfind("x1,x2,re,im,err\n", 0) == 0);
  json j = json::parse(take(sup));
  CHECK(j["columns"].size() == 5);
  CHECK(j["slab_hi"].get<double>() <= 0.0);
  CHECK(ka_null_solution_sample(v, "-1:1:-1", 1e-3, &csv, nullptr) == KA_ERR_INVALID_ARGUMENT);
  ka_null_solution_free(v);
}

TEST_CASE("slab run rejects bad parameters") {
  Heat H;
  ka_slab_run* run = nullptr;
  CHECK(ka_slab_solution_run(H.dec, R"({"a":1,"eps":1})", &run) == KA_ERR_PRECONDITION);
  CHECK(ka_slab_solution_run(H.dec, R"({"rho":2.5})", &run) == KA_ERR_PRECONDITION);
  CHECK(run == nullptr);
}

TEST_CASE("small slab run through the C interface") {
  Heat H;
  ka_slab_run* run = nullptr;
  REQUIRE(ka_slab_solution_run(H.dec, R"({"n":40,"grid":"-1.6:0.4:-0.1:0.1:0.2"})", &run) == KA_OK);
  char* s = nullptr;
  REQUIRE(ka_slab_run_summary(run, &s) == KA_OK);
  json j = json::parse(take(s));
  CHECK(j["spec"]["n"] == 40);
  CHECK(j["support"]["slab_hi"].get<double>() <= 0.2);
  REQUIRE(ka_slab_run_csv(run, &s) == KA_OK);
  std::string c = take(s);
  CHECK(std::count(c.begin(), c.end(), '\n') == 1 + 11 * 2);
  ka_slab_run_free(run);
}

TEST_CASE("domain checks through the C interface") {
  ka_domain *pp = nullptr, *pl = nullptr, *hp = nullptr;
  REQUIRE(ka_domain_from_json(kPunctured, &pp) == KA_OK);
  REQUIRE(ka_domain_from_json(kPlane, &pl) == KA_OK);
  REQUIRE(ka_domain_from_json(kHalf, &hp) == KA_OK);
  std::size_t n = 0;
  REQUIRE(ka_domain_count(pl, &n) == KA_OK);
  CHECK(n == 41 * 41);

  int outcome = -1;
  char* js = nullptr;
  REQUIRE(ka_runge_pair_check(pp, pl, 1, &js, &outcome) == KA_OK);
  CHECK(outcome == 1);
  json v = json::parse(take(js));
  CHECK(v["witness"]["slice"].get<double>() == doctest::Approx(0.0));
  REQUIRE(ka_runge_pair_check(hp, pl, 2, nullptr, &outcome) == KA_OK);
  CHECK(outcome == 0);
  // X1 must lie inside X2
  CHECK(ka_runge_pair_check(pl, hp, 1, nullptr, &outcome) == KA_ERR_PRECONDITION);

  REQUIRE(ka_pconvex_check(pp, 1, -1, nullptr, &outcome) == KA_OK);
  CHECK(outcome == 1);
  REQUIRE(ka_pconvex_check(hp, 1, -1, nullptr, &outcome) == KA_OK);
  CHECK(outcome == 0);

  ka_domain *a = nullptr, *b = nullptr;
  REQUIRE(ka_domain_from_json(R"({"dim":1,"window":{"lo":[-2],"hi":[2]},"h":0.1,
      "shape":{"type":"difference","of":[{"type":"all"},{"type":"rect","lo":[-0.5],"hi":[0.5]}]}})", &a) == KA_OK);
  REQUIRE(ka_domain_from_json(R"({"dim":1,"window":{"lo":[-2],"hi":[2]},"h":0.1,"shape":{"type":"all"}})", &b) ==
          KA_OK);
  REQUIRE(ka_tube_check(-1, 1, a, -2, 2, b, nullptr, &outcome) == KA_OK);
  CHECK(outcome == 1);
  CHECK(ka_tube_check(-3, 1, a, -2, 2, b, nullptr, &outcome) == KA_ERR_PRECONDITION);
  ka_domain_free(a);
  ka_domain_free(b);

  CHECK(ka_domain_from_json(R"({"dim":2,"h":0.1})", &a) == KA_ERR_PARSE);
  CHECK(ka_domain_from_json("not json", &a) == KA_ERR_PARSE);
  ka_domain_free(pp);
  ka_domain_free(pl);
  ka_domain_free(hp);
}

TEST_CASE("overlay written and read back as a mask") {
  ka_domain* pp = nullptr;
  REQUIRE(ka_domain_from_json(kPunctured, &pp) == KA_OK);
  auto path = (std::filesystem::temp_directory_path() / "ka_capi_overlay.pgm").string();
  REQUIRE(ka_domain_overlay(pp, 0.0, path.c_str()) == KA_OK);
  ka_domain* back = nullptr;
  REQUIRE(ka_domain_from_mask(path.c_str(), -2, -2, 0.1, 128, &back) == KA_OK);
  std::size_t n1 = 0, n2 = 0;
  ka_domain_count(pp, &n1);
  ka_domain_count(back, &n2);
  CHECK(n1 == n2);
  int o1 = -1, o2 = -1;
  REQUIRE(ka_runge_pair_check(pp, pp, 1, nullptr, &o1) == KA_OK);
  REQUIRE(ka_pconvex_check(back, 1, -1, nullptr, &o2) == KA_OK);
  CHECK(o2 == 1);
  std::remove(path.c_str());
  CHECK(ka_domain_from_mask(path.c_str(), 0, 0, 0.1, 128, &back) == KA_ERR_IO);
  ka_domain_free(back);
  ka_domain_free(pp);
}

TEST_CASE("whole runs from a JSON configuration") {
  char* rep = nullptr;
  int code = -1;
  REQUIRE(ka_run(R"({"command":"analyze","op":"heat"})", &rep, &code) == KA_OK);
  CHECK(code == 0);
  json j = json::parse(take(rep));
  CHECK(j["version"] == "0.1.0");
  CHECK(j["config"]["op"] == "heat");
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["result"]["hypotheses"]["all_hold"] == true);

  REQUIRE(ka_run(R"({"command":"analyze","poly":"x1*x2"})", &rep, &code) == KA_OK);
  CHECK(code == 2);
  CHECK(json::parse(take(rep))["result"]["hypotheses"]["ed_noncharacteristic"] == false);

  code = -1;
  CHECK(ka_run(R"({"command":"analyze"})", &rep, &code) == KA_ERR_INVALID_ARGUMENT);
  CHECK(code == 1);
  CHECK(ka_run(R"({"command":"analyze","op":"heat","colour":1})", &rep, &code) == KA_ERR_INVALID_ARGUMENT);
  CHECK(ka_run(R"({"command":"analyze","op":"heat","n":"ten"})", &rep, &code) == KA_ERR_INVALID_ARGUMENT);
  CHECK(ka_run(R"({"command":"fly"})", &rep, &code) == KA_ERR_INVALID_ARGUMENT);
  CHECK(ka_run("[1,2", &rep, &code) == KA_ERR_PARSE);
}
