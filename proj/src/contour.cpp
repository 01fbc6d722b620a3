#include "contour.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"

namespace ka {

nlohmann::json ContourSpec::to_json() const {
  return {{"tau", tau},   {"r", r},           {"sigma_max", sigma_max}, {"tol", tol},
          {"panel_phase", panel_phase}, {"branch", branch}, {"threads", threads}};
}

ContourSpec ContourSpec::from_json(const nlohmann::json& j) {
  ContourSpec c;
  c.tau = j.value("tau", c.tau);
  c.r = j.value("r", c.r);
  c.sigma_max = j.value("sigma_max", c.sigma_max);
  c.tol = j.value("tol", c.tol);
  c.panel_phase = j.value("panel_phase", c.panel_phase);
  c.branch = j.value("branch", c.branch);
  c.threads = j.value("threads", c.threads);
  return c;
}

const GKRule& gk61() {
  static const GKRule rule = [] {
    using K = boost::math::quadrature::gauss_kronrod<double, 61>;
    using G = boost::math::quadrature::gauss<double, 30>;
    const auto& kx = K::abscissa();
    const auto& kw = K::weights();
    const auto& gx = G::abscissa();
    const auto& gw = G::weights();
    GKRule r;
    // Boost stores the nonnegative half, ascending from 0
    int n = static_cast<int>(kx.size());  // 31
    for (int i = 0; i < n; ++i) {
      double wg = 0;
      for (std::size_t g = 0; g < gx.size(); ++g)
        if (std::abs(gx[g] - kx[i]) < 1e-14) wg = gw[g];
      r.x[30 + i] = kx[i];
      r.wk[30 + i] = kw[i];
      r.wg[30 + i] = wg;
      r.x[30 - i] = -kx[i];
      r.wk[30 - i] = kw[i];
      r.wg[30 - i] = wg;
    }
    return r;
  }();
  return rule;
}

std::vector<Panel> refine_panels(const std::vector<Panel>& panels, const std::function<bool(const Panel&)>& needs_split,
                                 int max_depth) {
  std::vector<Panel> out;
  std::function<void(const Panel&, int)> rec = [&](const Panel& p, int depth) {
    if (depth < max_depth && needs_split(p)) {
      double c = 0.5 * (p.a + p.b);
      rec({p.a, c}, depth + 1);
      rec({c, p.b}, depth + 1);
    } else {
      out.push_back(p);
    }
  };
  for (auto& p : panels) rec(p, 0);
  return out;
}

namespace {

std::vector<double> scan_points(double x0, double cap, double ratio) {
  std::vector<double> xs{x0};
  double step = std::max(1e-3, x0 * (ratio - 1));
  while (xs.back() < cap) {
    double x = std::min(cap, xs.back() + std::max(step, xs.back() * (ratio - 1)));
    xs.push_back(x);
  }
  return xs;
}

// cumulative trapezoid of exp(L) from the right end, plus the end term
std::vector<double> tails(const std::function<double(double)>& log_env, const std::vector<double>& xs) {
  std::vector<double> L(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) L[i] = log_env(xs[i]);
  std::vector<double> t(xs.size(), 0.0);
  // beyond the cap: exp(L) times the last scan width, a crude but
  // monotone stand-in that flags envelopes still large at the cap
  std::size_t n = xs.size();
  double end = std::exp(L[n - 1]) * std::max(xs[n - 1], 1.0);
  t[n - 1] = end;
  for (std::size_t i = n - 1; i-- > 0;)
    t[i] = t[i + 1] + 0.5 * (xs[i + 1] - xs[i]) * (std::exp(L[i]) + std::exp(L[i + 1]));
  return t;
}

}  // namespace

Truncation choose_truncation(const std::function<double(double)>& log_env, double x0, double cap, double tol,
                             double ratio) {
  auto xs = scan_points(x0, cap, ratio);
  auto t = tails(log_env, xs);
  Truncation tr;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (t[i] <= tol) {
      tr.x = xs[i];
      tr.tail = t[i];
      tr.ok = true;
      return tr;
    }
  tr.x = cap;
  tr.tail = t.back();
  return tr;
}

double envelope_tail(const std::function<double(double)>& log_env, double x, double cap, double ratio) {
  if (x >= cap) return std::exp(log_env(cap)) * std::max(cap, 1.0);
  auto xs = scan_points(x, cap, ratio);
  return tails(log_env, xs).front();
}

}  // namespace ka
