#include "slab_solution.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "error.hpp"

namespace ka {

const ColumnClass& SupportReport::column(double x1) const {
  require(!columns.empty(), ErrorCode::invalid_argument, "empty support report");
  auto it = std::min_element(columns.begin(), columns.end(), [x1](const ColumnClass& a, const ColumnClass& b) {
    return std::fabs(a.x1 - x1) < std::fabs(b.x1 - x1);
  });
  return *it;
}

nlohmann::json SupportReport::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (auto& c : columns)
    cols.push_back({{"x1", c.x1}, {"max_abs", c.max_abs}, {"max_err", c.max_err}, {"class", c.label}});
  nlohmann::json j = {{"tol_rel", tol_rel}, {"threshold", threshold}, {"field_max", field_max}, {"columns", cols}};
  j["slab_lo"] = slab_lo ? nlohmann::json(*slab_lo) : nlohmann::json();
  j["slab_hi"] = slab_hi ? nlohmann::json(*slab_hi) : nlohmann::json();
  return j;
}

SupportReport support_report(const Field& field, double tol_rel) {
  SupportReport rep;
  rep.tol_rel = tol_rel;
  rep.field_max = field.max_abs();
  rep.threshold = tol_rel * rep.field_max;
  const Grid2& g = field.grid;
  for (int i = 0; i < g.n1(); ++i) {
    ColumnClass c;
    c.x1 = g.x1(i);
    for (int j = 0; j < g.n2(); ++j) {
      c.max_abs = std::max(c.max_abs, std::abs(field.at(i, j)));
      c.max_err = std::max(c.max_err, field.err(i, j));
    }
    if (c.max_abs + c.max_err <= rep.threshold)
      c.label = "negligible";
    else if (c.max_abs - c.max_err > rep.threshold)
      c.label = "significant";
    else
      c.label = "indeterminate";
    if (c.label != "negligible") {
      rep.slab_lo = rep.slab_lo ? std::min(*rep.slab_lo, c.x1) : c.x1;
      rep.slab_hi = rep.slab_hi ? std::max(*rep.slab_hi, c.x1) : c.x1;
    }
    rep.columns.push_back(c);
  }
  return rep;
}

nlohmann::json SlabSpec::to_json() const {
  return {{"a", a},
          {"eps", eps},
          {"rho", rho},
          {"n", n},
          {"grid", grid.to_json()},
          {"contour", contour.to_json()},
          {"tol_rel", tol_rel},
          {"margin_lo_frac", margin_lo_frac},
          {"margin_hi_frac", margin_hi_frac}};
}

SlabSpec SlabSpec::from_json(const nlohmann::json& j) {
  SlabSpec s;
  s.a = j.value("a", s.a);
  s.eps = j.value("eps", s.eps);
  s.rho = j.value("rho", s.rho);
  s.n = j.value("n", s.n);
  if (j.contains("grid")) s.grid = Grid2::from_json(j["grid"]);
  if (j.contains("contour")) s.contour = ContourSpec::from_json(j["contour"]);
  s.tol_rel = j.value("tol_rel", s.tol_rel);
  s.margin_lo_frac = j.value("margin_lo_frac", s.margin_lo_frac);
  s.margin_hi_frac = j.value("margin_hi_frac", s.margin_hi_frac);
  return s;
}

std::shared_ptr<const TraceProductOracle::Cache::Entry> TraceProductOracle::Cache::get(double x1) {
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = at.find(x1);
    if (it != at.end()) return it->second;
  }
  auto e = std::make_shared<Entry>();
  if (x1 > g->true_support_lo() && x1 < g->true_support_hi()) {
    e->g = g->derivatives(x1, order);
    e->trace = v->trace_jet(x1, order, jmax);
  }
  std::lock_guard<std::mutex> lock(mu);
  return at.emplace(x1, std::move(e)).first->second;
}

TraceProductOracle::TraceProductOracle(std::shared_ptr<Cache> cache, int j, int max_order)
    : cache_(std::move(cache)), j_(j), max_order_(max_order) {}

std::string TraceProductOracle::describe() const { return "g * D2^" + std::to_string(j_) + " v(x1, 0)"; }

Estimate TraceProductOracle::derivative(std::span<const double> x, const Exponent& beta) const {
  require(x.size() == 1 && beta.size() == 1, ErrorCode::invalid_argument, "trace data live on the line");
  const int b = beta[0];
  require(b <= cache_->order, ErrorCode::precondition,
          "derivative order " + std::to_string(b) + " beyond the prepared jet order");
  auto e = cache_->get(x[0]);
  Estimate out;
  if (e->g.empty()) return out;
  const auto& tr = e->trace[static_cast<std::size_t>(j_)];
  double binom = 1;
  for (int i = 0; i <= b; ++i) {
    if (i > 0) binom = binom * (b - i + 1) / i;
    double gi = e->g[static_cast<std::size_t>(i)];
    if (gi == 0) continue;
    const Estimate& t = tr[static_cast<std::size_t>(b - i)];
    out.value += binom * gi * t.value;
    out.error += std::fabs(binom * gi) * t.error;
  }
  return out;
}

nlohmann::json SlabSolutionRun::summary() const {
  return {{"spec", spec.to_json()},
          {"hypotheses", hypotheses.to_json()},
          {"cutoff", cutoff},
          {"derivative_order", derivative_order},
          {"gevrey_fit", {{"C", fit.C}, {"R", fit.R}, {"rho", fit.rho}, {"envelope_ok", fit.envelope_ok}}},
          {"tail_bound",
           {{"value", std::isfinite(tail.value) ? nlohmann::json(tail.value) : nlohmann::json("inf")},
            {"diverges", tail.diverges},
            {"overflow", tail.overflow}}},
          {"degraded_confidence", degraded},
          {"strip", {{"max_v", strip_max_v}, {"max_diff", strip_max_diff}, {"max_err", strip_max_err}}},
          {"support", support.to_json()},
          {"contour", v ? v->info() : nlohmann::json()}};
}

SlabSolutionRun slab_solution(const SlabDecomposition& dec, const SlabSpec& spec) {
  require(dec.dim == 2, ErrorCode::invalid_argument, "slab solutions are built in two variables");
  require(spec.eps > 0 && spec.eps < spec.a, ErrorCode::precondition, "need 0 < eps < a");
  require(spec.n >= dec.m - 1, ErrorCode::invalid_argument, "truncation order must be >= m-1");
  SlabSolutionRun run;
  run.spec = spec;
  run.hypotheses = check_hypotheses(dec);
  const auto& hyp = run.hypotheses;
  require(hyp.gamma_defined, ErrorCode::precondition, "gamma is undefined for this operator");
  require(spec.rho > 1 && spec.rho * hyp.gamma_value < 1, ErrorCode::precondition,
          "rho must lie in (1, 1/gamma)");

  auto g = std::make_shared<const GevreyCutoff>(
      slab_cutoff_spec(spec.a, spec.eps, spec.rho, spec.margin_lo_frac, spec.margin_hi_frac));
  run.cutoff = g->to_json();
  auto v = std::make_shared<const HormanderV>(dec, spec.contour);
  run.v = v;

  auto cache = std::make_shared<TraceProductOracle::Cache>();
  cache->v = v;
  cache->g = g;
  cache->jmax = dec.m - 1;
  const int bound = spec.n + dec.m;
  std::vector<CauchyData> h;
  for (int j = 0; j < dec.m; ++j)
    h.push_back(CauchyData::numeric(std::make_shared<TraceProductOracle>(cache, j, bound)));
  auto sol = std::make_shared<CauchySolution>(cauchy_solve(dec, h, spec.n));
  run.solution = sol;
  for (auto& U : sol->U)
    for (auto& t : U.numeric_terms()) run.derivative_order = std::max(run.derivative_order, t.op.degree());
  cache->order = run.derivative_order;

  const Grid2& grid = spec.grid;
  std::vector<double> cols;
  for (int i = 0; i < grid.n1(); ++i) cols.push_back(grid.x1(i));
  // trace jets per column, optionally in parallel
  {
    int nt = std::max(1, spec.contour.threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < cols.size(); i += nt) cache->get(cols[i]);
      });
    for (auto& th : pool) th.join();
  }

  run.field.grid = grid;
  run.field.value.resize(static_cast<std::size_t>(grid.n1()) * grid.n2());
  run.field.error.resize(run.field.value.size());
  for (int i = 0; i < grid.n1(); ++i)
    for (int j = 0; j < grid.n2(); ++j) {
      double xp = grid.x1(i);
      auto e = sol->evaluate(std::span<const double>(&xp, 1), grid.x2(j));
      run.field.value[run.field.index(i, j)] = e.value;
      run.field.error[run.field.index(i, j)] = e.error;
    }
  run.support = support_report(run.field, spec.tol_rel);

  // Gevrey constants of the data from the sampled jets
  std::vector<double> maxima(static_cast<std::size_t>(run.derivative_order) + 1, 0.0);
  for (double x1 : cols)
    for (int j = 0; j < dec.m; ++j)
      for (int k = 0; k <= run.derivative_order; ++k) {
        auto d = h[static_cast<std::size_t>(j)].numeric_terms()[0].oracle->derivative(
            std::span<const double>(&x1, 1), Exponent{k});
        maxima[static_cast<std::size_t>(k)] = std::max(maxima[static_cast<std::size_t>(k)], std::abs(d.value));
      }
  run.fit = fit_gevrey_constants(maxima, spec.rho);
  double B = std::max(std::fabs(grid.x2min), std::fabs(grid.x2max));
  run.tail = convergence_tail_bound(spec.n, run.fit.C, run.fit.R, B, spec.rho, hyp.gamma_value, dec.m, hyp.q);
  run.degraded = !run.fit.envelope_ok || !std::isfinite(run.tail.value) ||
                 run.tail.value > spec.tol_rel * run.support.field_max;

  // comparison with v where g = 1
  std::vector<std::array<double, 2>> pts;
  std::vector<std::size_t> idx;
  const double slack = 1e-9 * grid.h;
  for (int i = 0; i < grid.n1(); ++i) {
    double x1 = grid.x1(i);
    if (x1 <= -spec.a + slack || x1 >= -spec.eps - slack) continue;
    for (int j = 0; j < grid.n2(); ++j) {
      pts.push_back({x1, grid.x2(j)});
      idx.push_back(run.field.index(i, j));
    }
  }
  if (!pts.empty()) {
    auto ve = v->evaluate(pts);
    for (std::size_t q = 0; q < pts.size(); ++q) {
      run.strip_max_v = std::max(run.strip_max_v, std::abs(ve[q].value));
      run.strip_max_diff = std::max(run.strip_max_diff, std::abs(ve[q].value - run.field.value[idx[q]]));
      run.strip_max_err = std::max(run.strip_max_err, ve[q].error + run.field.error[idx[q]]);
    }
  }
  return run;
}

}  // namespace ka
