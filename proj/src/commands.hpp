#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "domains.hpp"
#include "multipoly.hpp"

namespace ka {

inline constexpr const char* kVersion = "0.1.0";

// Everything a run depends on. Serialized in full into every report.
struct RunConfig {
  std::string command;  // analyze | cauchy | null-solution | runge-check | pconvex-check | tube-check
  std::string op;       // preset: heat | schrodinger
  std::string poly;     // operator text, overrides op
  std::string mode = "exact";
  std::uint64_t seed = 1;
  int threads = 1;

  // cauchy
  std::vector<std::string> data;  // "h0=...", "h1=..."
  int n = -1;                     // -1 picks the per-command default
  bool verify_explicit = false;
  int lmax = 12;

  // null-solution
  bool v_only = false;
  double a = 1.0, eps = 0.25, rho = 1.5;
  double tau = 0, r = 0.75, quad_tol = 1e-12;
  double tol_rel = 1e-3;
  std::string grid;  // X1MIN:X1MAX:X2MIN:X2MAX:H, empty picks the per-command default

  // geometry; a domain is inline JSON, a JSON file, or a .pgm/.png mask
  std::string domain, x1, x2;
  std::string i1, i2;  // "lo:hi" for tube-check
  std::vector<double> mask_origin{0.0, 0.0};
  double mask_h = 0.1;
  int mask_threshold = 128;
  double qc_tol = -1;

  // outputs
  std::string csv, matrix, overlay, report;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct CommandResult {
  int exit_code = 0;  // 0 pass, 2 fail
  nlohmann::json report;
};

// Runs the command, writes any requested files and returns the report
// (also written to config.report when set). Throws ka::Error on usage or
// runtime errors.
CommandResult run_command(const RunConfig& config);

// "heat" -> "i*x1 + x2^2", "schrodinger" -> "-x1 + x2^2"
std::string preset_polynomial(const std::string& name);
// largest K among the variables xK named in the text
int named_dim(const std::string& text);
MultiPoly config_operator(const RunConfig& config);
GridDomain load_domain(const std::string& source, const RunConfig& config);

}  // namespace ka
