// Runs the built command-line tool and checks outputs and exit codes.
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef KA_CLI_PATH
#error "KA_CLI_PATH must name the command-line binary"
#endif

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(KA_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / "ka_cli_test";
  fs::create_directories(d);
  return d;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

const std::string kWin = R"("dim":2,"window":{"lo":[-2,-2],"hi":[2,2]},"h":0.1)";
const std::string kPunctured =
    "{" + kWin + R"(,"shape":{"type":"difference","of":[{"type":"all"},{"type":"ball","center":[0,0],"radius":0.3}]}})";
const std::string kPlane = "{" + kWin + R"(,"shape":{"type":"all"}})";
const std::string kUpper = "{" + kWin + R"(,"shape":{"type":"halfspace","normal":[0,1],"offset":0}})";

}  // namespace

TEST_CASE("analyze") {
  Run r = run("analyze --poly " + quote("i*x1 + x2^2"));
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["result"]["hypotheses"]["gamma"] == 0.5);
  CHECK(j["result"]["hypotheses"]["all_hold"] == true);
  CHECK(j["result"]["hypotheses"]["e1_characteristic"] == true);
  CHECK(j["result"]["hypotheses"]["ed_noncharacteristic"] == true);

  r = run("analyze --poly x1*x2");
  CHECK(r.code == 2);
  CHECK(json::parse(r.out)["result"]["hypotheses"]["ed_noncharacteristic"] == false);

  CHECK(run("analyze").code == 1);
  CHECK(run("analyze --op wave").code == 1);
  CHECK(run("analyze --poly " + quote("x1 +")).code == 1);
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("--help").code == 0);
}

TEST_CASE("reports embed the configuration and version") {
  Run r = run("analyze --op schrodinger --seed 7");
  json j = json::parse(r.out);
  CHECK(j["version"] == "0.1.0");
  CHECK(j["config"]["command"] == "analyze");
  CHECK(j["config"]["op"] == "schrodinger");
  CHECK(j["config"]["seed"] == 7);
  CHECK(j["config"].contains("tol_rel"));
  CHECK(j["config"].contains("grid"));
}

TEST_CASE("cauchy: heat with h1 = x1 reproduces the closed form") {
  auto csv = scratch() / "cauchy.csv";
  Run r = run("cauchy --op heat --data h1=x1 --grid=-1:1:-1:1:0.1 --csv " + csv.string());
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["result"]["solution"]["polynomial"] == "1/6*i*x2^3 + i*x1*x2");
  CHECK(j["result"]["identity"]["exact"] == true);
  CHECK(j["result"]["identity"]["max_abs_residual"] == 0.0);
  CHECK(j["result"]["null_residual"]["exact"] == true);

  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line == "x1,x2,re,im,err");
  int rows = 0;
  double worst = 0;
  while (std::getline(in, line)) {
    double x1, x2, re, im, err;
    char c;
    std::istringstream ls(line);
    ls >> x1 >> c >> x2 >> c >> re >> c >> im >> c >> err;
    std::complex<double> expect(0.0, x1 * x2 + x2 * x2 * x2 / 6);
    worst = std::max(worst, std::abs(std::complex<double>(re, im) - expect));
    ++rows;
  }
  CHECK(rows == 21 * 21);
  CHECK(worst < 1e-14);
}

TEST_CASE("cauchy: explicit-formula report and bad data") {
  Run r = run("cauchy --op heat --data " + quote("h0=x1^3") + " --data h1=x1 --verify-explicit --lmax 12");
  REQUIRE(r.code == 0);
  json e = json::parse(r.out)["result"]["explicit_formula"];
  CHECK(e["exact"] == true);
  CHECK(e["l_range"] == json({0, 12}));

  CHECK(run("cauchy --op heat --data " + quote("h1=x1 +")).code == 1);
  CHECK(run("cauchy --op heat --data h5=x1").code == 1);
  CHECK(run("cauchy --op heat --data x1").code == 1);
  CHECK(run("cauchy --poly x1*x2 --data h0=x1").code == 1);
}

TEST_CASE("null-solution: half-space support of v") {
  Run r = run("null-solution --op heat --v-only --grid=-2:1:-2:2:0.25");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out)["result"];
  CHECK(j["check"]["violating_columns"].empty());
  CHECK(j["support"]["slab_hi"].get<double>() <= 0.25);
  CHECK(j["check"]["significant_in_half_space"] == true);
}

TEST_CASE("null-solution: slab support within the expected bounds") {
  auto dir = scratch();
  Run r = run("null-solution --op heat --a 1.0 --eps 0.25 --rho 1.5 --n 80 --csv " + (dir / "slab.csv").string() +
              " --matrix " + (dir / "slab.mat").string() + " --report " + (dir / "slab.json").string());
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  json j = json::parse(slurp(dir / "slab.json"))["result"];
  double lo = j["result"]["support"]["slab_lo"], hi = j["result"]["support"]["slab_hi"];
  CHECK(lo >= -1.3);
  CHECK(hi <= 0.05);
  // heatmap: one row per x2 value, one column per x1 value
  std::istringstream m(slurp(dir / "slab.mat"));
  std::string row;
  int rows = 0;
  while (std::getline(m, row)) ++rows;
  CHECK(rows == 5);

  CHECK(run("null-solution --op heat --a 1 --eps 1").code == 1);
  CHECK(run("null-solution --op heat --a 1 --eps 1.5").code == 1);
  CHECK(run("null-solution --poly " + quote("x1^2 + x2^2 + x3")).code == 1);
}

TEST_CASE("geometry commands") {
  auto dir = scratch();
  auto ov = dir / "overlay.pgm";
  Run r = run("runge-check --x1 " + quote(kPunctured) + " --x2 " + quote(kPlane) + " --overlay " + ov.string());
  CHECK(r.code == 2);
  json v = json::parse(r.out)["result"]["verdict"];
  CHECK(v["outcome"] == "fail");
  CHECK(v["witness"]["slice"].get<double>() == doctest::Approx(0.0));
  CHECK(slurp(ov).rfind("P5\n41 41\n255\n", 0) == 0);

  r = run("runge-check --x1 " + quote(kUpper) + " --x2 " + quote(kPlane) + " --op heat");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["result"]["hypotheses"]["all_hold"] == true);

  CHECK(run("pconvex-check --domain " + quote(kPunctured)).code == 2);
  CHECK(run("pconvex-check --domain " + quote(kUpper)).code == 0);

  std::ofstream(dir / "upper.json") << kUpper;
  CHECK(run("pconvex-check --domain " + (dir / "upper.json").string()).code == 0);

  std::string gap = R"({"dim":1,"window":{"lo":[-2],"hi":[2]},"h":0.1,
      "shape":{"type":"difference","of":[{"type":"all"},{"type":"rect","lo":[-0.5],"hi":[0.5]}]}})";
  std::string line = R"({"dim":1,"window":{"lo":[-2],"hi":[2]},"h":0.1,"shape":{"type":"all"}})";
  CHECK(run("tube-check --i1=-1:1 --x1 " + quote(gap) + " --i2=-2:2 --x2 " + quote(line)).code == 2);
  CHECK(run("tube-check --i1=-1:1 --x1 " + quote(line) + " --i2=-2:2 --x2 " + quote(line)).code == 0);
  CHECK(run("tube-check --i1=-1:3 --x1 " + quote(line) + " --i2=-2:2 --x2 " + quote(line)).code == 1);
}

TEST_CASE("geometry input errors exit 1") {
  CHECK(run("pconvex-check --domain " + quote(R"({"dim":2,"h":0.1)")).code == 1);
  CHECK(run("pconvex-check --domain " + quote(R"({"dim":2,"h":0.1})")).code == 1);
  CHECK(run("pconvex-check --domain /nonexistent/domain.json").code == 1);
  CHECK(run("runge-check --x1 " + quote(kPunctured)).code == 1);
  CHECK(run("runge-check --x1 " + quote(kPlane) + " --x2 " + quote(kUpper)).code == 1);
}

TEST_CASE("mask input") {
  auto dir = scratch();
  auto ov = dir / "mask.pgm";
  // the overlay of a 2D domain reads back as the same domain
  run("runge-check --x1 " + quote(kPunctured) + " --x2 " + quote(kPunctured) + " --overlay " + ov.string());
  Run r = run("pconvex-check --domain " + ov.string() + " --mask-origin -2 -2 --mask-h 0.1");
  CHECK(r.code == 2);
  json j = json::parse(r.out)["result"];
  CHECK(j["X"]["source"] == "mask");
  r = run("runge-check --x1 " + ov.string() + " --x2 " + ov.string() + " --mask-origin -2 -2 --mask-h 0.1");
  CHECK(r.code == 0);
}

TEST_CASE("identical configurations give byte-identical reports") {
  auto dir = scratch();
  for (const std::string& args :
       {std::string("analyze --op heat"), std::string("cauchy --op heat --data h1=x1 --verify-explicit"),
        std::string("null-solution --op schrodinger --v-only --grid=-1:1:-1:1:0.5"),
        "runge-check --threads 2 --x1 " + quote(kPunctured) + " --x2 " + quote(kPlane)}) {
    Run a = run(args + " --report " + (dir / "a.json").string());
    Run b = run(args + " --report " + (dir / "a.json").string());
    std::string ra = slurp(dir / "a.json");
    Run c = run(args);
    CHECK(a.code == b.code);
    CHECK(!ra.empty());
    json ja = json::parse(ra), jc = json::parse(c.out);
    ja["config"].erase("report");
    jc["config"].erase("report");
    CHECK(ja.dump() == jc.dump());
    Run d = run(args);
    CHECK(c.out == d.out);
  }
}
