// Command-line front end. Builds a JSON run configuration from the flags and
// hands it to ka_run; only the public C interface is used.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kernapprox/kernapprox.h"

namespace {

using nlohmann::json;

// Registers a flag whose value lands in cfg[key] only when given.
template <class T>
CLI::Option* opt(CLI::App* app, json& cfg, const std::string& flags, const std::string& key, const std::string& help,
         const std::string& def = "") {
  auto* o = app->add_option_function<T>(flags, [&cfg, key](const T& v) { cfg[key] = v; }, help);
  if (!def.empty()) o->default_str(def);
  return o;
}

void flag(CLI::App* app, json& cfg, const std::string& flags, const std::string& key, const std::string& help) {
  app->add_flag_callback(flags, [&cfg, key] { cfg[key] = true; }, help);
}

void operator_flags(CLI::App* app, json& cfg) {
  opt<std::string>(app, cfg, "--op", "op", "operator preset: heat (i*x1 + x2^2) or schrodinger (-x1 + x2^2)");
  opt<std::string>(app, cfg, "--poly", "poly", "operator polynomial in x1..xd, symbol of D = -i d/dx");
  opt<std::string>(app, cfg, "--mode", "mode", "coefficient arithmetic: exact or floating", "exact");
  opt<std::uint64_t>(app, cfg, "--seed", "seed", "seed for sampled hypothesis checks", "1");
}

void output_flags(CLI::App* app, json& cfg) {
  opt<std::string>(app, cfg, "--report", "report", "write the JSON report here instead of stdout");
}

void domain_flags(CLI::App* app, json& cfg) {
  app->add_option_function<std::vector<double>>(
         "--mask-origin", [&cfg](const std::vector<double>& v) { cfg["mask_origin"] = v; },
         "coordinates of the bottom-left pixel center of image masks")
      ->expected(2)
      ->default_str("0 0");
  opt<double>(app, cfg, "--mask-h", "mask_h", "pixel spacing of image masks", "0.1");
  opt<int>(app, cfg, "--mask-threshold", "mask_threshold", "gray level at or above which a pixel is inside", "128");
  opt<int>(app, cfg, "--threads", "threads", "worker threads", "1");
  opt<std::string>(app, cfg, "--overlay", "overlay", "write a PGM overlay of the witness (2D)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cauchy-problem solver, null-solution constructor and Runge-pair geometry checks"};
  app.set_version_flag("--version", std::string(ka_version()));
  app.require_subcommand(1);
  json cfg = json::object();

  auto* analyze = app.add_subcommand("analyze", "check the structural hypotheses of an operator");
  operator_flags(analyze, cfg);
  output_flags(analyze, cfg);

  auto* cauchy = app.add_subcommand("cauchy", "solve P(D)u = 0, D_d^j u(x',0) = h_j by the power series");
  operator_flags(cauchy, cfg);
  output_flags(cauchy, cfg);
  cauchy->add_option_function<std::vector<std::string>>(
          "--data", [&cfg](const std::vector<std::string>& v) { cfg["data"] = v; },
          "Cauchy data hJ=EXPR, repeatable; missing h_j are zero");
  opt<int>(cauchy, cfg, "--n", "n", "series truncation order", "20");
  opt<std::string>(cauchy, cfg, "--grid", "grid", "sampling grid X1MIN:X1MAX:X2MIN:X2MAX:H (d = 2)", "-1:1:-1:1:0.1");
  opt<std::string>(cauchy, cfg, "--csv", "csv", "write samples x1,x2,re,im,err");
  opt<std::string>(cauchy, cfg, "--matrix", "matrix", "write |u| as a whitespace matrix, one row per x2");
  flag(cauchy, cfg, "--verify-explicit", "verify_explicit", "compare the recursion with the explicit sum");
  opt<int>(cauchy, cfg, "--lmax", "lmax", "largest l for --verify-explicit", "12");

  auto* nulls = app.add_subcommand("null-solution", "half-space and slab supported null solutions (d = 2)");
  operator_flags(nulls, cfg);
  output_flags(nulls, cfg);
  opt<double>(nulls, cfg, "--a", "a", "slab depth", "1");
  opt<double>(nulls, cfg, "--eps", "eps", "cutoff margin, 0 < eps < a", "0.25");
  opt<double>(nulls, cfg, "--rho", "rho", "Gevrey order of the cutoff", "1.5");
  opt<int>(nulls, cfg, "--n", "n", "series truncation order", "80");
  opt<std::string>(nulls, cfg, "--grid", "grid",
                   "sampling grid X1MIN:X1MAX:X2MIN:X2MAX:H (slab default -1.6:0.4:-0.2:0.2:0.1, "
                   "--v-only default -2:1:-2:2:0.1)");
  opt<double>(nulls, cfg, "--tau", "tau", "contour height, 0 picks it from the branch asymptotics", "0");
  opt<double>(nulls, cfg, "--r", "r", "weight exponent in exp(-(s/i)^r)", "0.75");
  opt<double>(nulls, cfg, "--quad-tol", "quad_tol", "absolute quadrature target", "1e-12");
  opt<double>(nulls, cfg, "--tol-rel", "tol_rel", "relative threshold of the support classification", "1e-3");
  opt<int>(nulls, cfg, "--threads", "threads", "worker threads", "1");
  flag(nulls, cfg, "--v-only", "v_only", "sample the half-space solution v only");
  opt<std::string>(nulls, cfg, "--csv", "csv", "write samples x1,x2,re,im,err");
  opt<std::string>(nulls, cfg, "--matrix", "matrix", "write |u| as a whitespace matrix, one row per x2");

  auto* runge = app.add_subcommand("runge-check", "decide whether (X1, X2) is a Runge pair");
  operator_flags(runge, cfg);
  output_flags(runge, cfg);
  domain_flags(runge, cfg);
  opt<std::string>(runge, cfg, "--x1", "x1", "inner domain: JSON spec, JSON file or .pgm/.png mask")->required();
  opt<std::string>(runge, cfg, "--x2", "x2", "outer domain")->required();

  auto* pconv = app.add_subcommand("pconvex-check", "minimum principle for d_X on characteristic slices");
  operator_flags(pconv, cfg);
  output_flags(pconv, cfg);
  domain_flags(pconv, cfg);
  opt<std::string>(pconv, cfg, "--domain", "domain", "domain: JSON spec, JSON file or .pgm/.png mask")->required();
  opt<double>(pconv, cfg, "--qc-tol", "qc_tol", "quasiconcavity tolerance, negative picks h/2", "-1");

  auto* tube = app.add_subcommand("tube-check", "Runge test for product pairs I1 x X1n, I2 x X2n");
  operator_flags(tube, cfg);
  output_flags(tube, cfg);
  domain_flags(tube, cfg);
  opt<std::string>(tube, cfg, "--i1", "i1", "open interval LO:HI (use --i1=LO:HI for negative LO)")->required();
  opt<std::string>(tube, cfg, "--i2", "i2", "open interval LO:HI containing I1")->required();
  opt<std::string>(tube, cfg, "--x1", "x1", "spatial factor of the inner domain")->required();
  opt<std::string>(tube, cfg, "--x2", "x2", "spatial factor of the outer domain")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  cfg["command"] = app.get_subcommands().front()->get_name();
  char* report = nullptr;
  int code = 1;
  ka_status st = ka_run(cfg.dump().c_str(), &report, &code);
  if (st != KA_OK) {
    std::fprintf(stderr, "error (%s): %s\n", ka_status_name(st), ka_last_error());
    return 1;
  }
  if (!cfg.contains("report")) std::fputs(report, stdout);
  ka_string_free(report);
  return code;
}
