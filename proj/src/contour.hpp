#pragma once

#include <array>
#include <functional>
#include <vector>

#include <json.hpp>

namespace ka {

// Parameters of the contour integral for the half-space null solution.
struct ContourSpec {
  double tau = 0;           // height of Im s = tau; 0 picks max(1, 2 (2M)^p)
  double r = 0.75;          // exponent of the weight exp(-(s/i)^r)
  double sigma_max = 0;     // 0 picks the truncation from the envelope scan
  double tol = 1e-12;       // absolute target for the quadrature and the tail
  double panel_phase = 24;  // panel length times local frequency
  int branch = 0;
  int threads = 1;
  nlohmann::json to_json() const;
  static ContourSpec from_json(const nlohmann::json& j);
};

// 61-point Gauss-Kronrod rule on [-1, 1]; wg is the embedded 30-point Gauss
// weight (zero at the Kronrod-only nodes).
struct GKRule {
  std::array<double, 61> x{}, wk{}, wg{};
};
const GKRule& gk61();

struct Panel {
  double a = 0, b = 0;
};

// Splits panels in halves while `needs_split` says so, up to max_depth
// levels; order is preserved.
std::vector<Panel> refine_panels(const std::vector<Panel>& panels, const std::function<bool(const Panel&)>& needs_split,
                                 int max_depth = 12);

// Truncation of an integral over [x0, inf) from a log-envelope: the
// smallest scan point beyond which the envelope integral is at most tol.
struct Truncation {
  double x = 0;
  double tail = 0;
  bool ok = false;  // false when even the cap leaves a tail above tol
};
Truncation choose_truncation(const std::function<double(double)>& log_env, double x0, double cap, double tol,
                             double ratio = 1.02);
// Envelope integral over [x, cap] plus the end term, same scan as above.
double envelope_tail(const std::function<double(double)>& log_env, double x, double cap, double ratio = 1.02);

}  // namespace ka
