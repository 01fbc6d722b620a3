#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cauchy.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "hormander.hpp"
#include "image_io.hpp"
#include "slab.hpp"
#include "slab_solution.hpp"

namespace ka {

using nlohmann::json;

json RunConfig::to_json() const {
  return {{"command", command},
          {"op", op},
          {"poly", poly},
          {"mode", mode},
          {"seed", seed},
          {"threads", threads},
          {"data", data},
          {"n", n},
          {"verify_explicit", verify_explicit},
          {"lmax", lmax},
          {"v_only", v_only},
          {"a", a},
          {"eps", eps},
          {"rho", rho},
          {"tau", tau},
          {"r", r},
          {"quad_tol", quad_tol},
          {"tol_rel", tol_rel},
          {"grid", grid},
          {"domain", domain},
          {"x1", x1},
          {"x2", x2},
          {"i1", i1},
          {"i2", i2},
          {"mask_origin", mask_origin},
          {"mask_h", mask_h},
          {"mask_threshold", mask_threshold},
          {"qc_tol", qc_tol},
          {"csv", csv},
          {"matrix", matrix},
          {"overlay", overlay},
          {"report", report}};
}

RunConfig RunConfig::from_json(const json& j) {
  require(j.is_object(), ErrorCode::invalid_argument, "run configuration must be a JSON object");
  RunConfig c;
  const json defaults = c.to_json();
  for (auto it = j.begin(); it != j.end(); ++it)
    require(defaults.contains(it.key()), ErrorCode::invalid_argument, "unknown configuration key '" + it.key() + "'");
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const json::exception&) {
      fail(ErrorCode::invalid_argument, std::string("bad value for configuration key '") + key + "'");
    }
  };
  get("command", c.command);
  get("op", c.op);
  get("poly", c.poly);
  get("mode", c.mode);
  get("seed", c.seed);
  get("threads", c.threads);
  get("data", c.data);
  get("n", c.n);
  get("verify_explicit", c.verify_explicit);
  get("lmax", c.lmax);
  get("v_only", c.v_only);
  get("a", c.a);
  get("eps", c.eps);
  get("rho", c.rho);
  get("tau", c.tau);
  get("r", c.r);
  get("quad_tol", c.quad_tol);
  get("tol_rel", c.tol_rel);
  get("grid", c.grid);
  get("domain", c.domain);
  get("x1", c.x1);
  get("x2", c.x2);
  get("i1", c.i1);
  get("i2", c.i2);
  get("mask_origin", c.mask_origin);
  get("mask_h", c.mask_h);
  get("mask_threshold", c.mask_threshold);
  get("qc_tol", c.qc_tol);
  get("csv", c.csv);
  get("matrix", c.matrix);
  get("overlay", c.overlay);
  get("report", c.report);
  require(c.threads >= 1, ErrorCode::invalid_argument, "threads must be >= 1");
  require(c.mask_origin.size() == 2, ErrorCode::invalid_argument, "mask_origin needs two values");
  return c;
}

std::string preset_polynomial(const std::string& name) {
  if (name == "heat") return "i*x1 + x2^2";
  if (name == "schrodinger") return "-x1 + x2^2";
  fail(ErrorCode::invalid_argument, "unknown operator preset '" + name + "' (heat, schrodinger)");
}

namespace {

Mode config_mode(const RunConfig& c) {
  require(c.mode == "exact" || c.mode == "floating", ErrorCode::invalid_argument,
          "mode must be exact or floating, got '" + c.mode + "'");
  return mode_from_name(c.mode);
}

}  // namespace

int named_dim(const std::string& text) {
  int d = 0;
  for (std::size_t p = 0; p < text.size(); ++p) {
    if (text[p] != 'x' || p + 1 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[p + 1]))) continue;
    int k = 0;
    std::size_t q = p + 1;
    while (q < text.size() && std::isdigit(static_cast<unsigned char>(text[q]))) k = 10 * k + (text[q++] - '0');
    d = std::max(d, k);
  }
  return d;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrorCode::io, "cannot write " + path);
  out << text;
  require(bool(out), ErrorCode::io, "write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorCode::io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_suffix(const std::string& s, const std::string& suf) {
  if (s.size() < suf.size()) return false;
  for (std::size_t q = 0; q < suf.size(); ++q)
    if (std::tolower(static_cast<unsigned char>(s[s.size() - suf.size() + q])) != suf[q]) return false;
  return true;
}

Interval parse_interval(const std::string& text, const char* name) {
  auto colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::invalid_argument,
          std::string(name) + " needs LO:HI, got '" + text + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    Interval I{std::stod(a, &p1), std::stod(b, &p2)};
    if (p1 == a.size() && p2 == b.size()) return I;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::invalid_argument, std::string(name) + " needs LO:HI, got '" + text + "'");
}

json hypotheses_or_note(const MultiPoly& P, std::uint64_t seed) {
  try {
    return hypotheses_report(P, seed).to_json();
  } catch (const Error& e) {
    return {{"error", e.what()}};
  }
}

// ---- analyze

int cmd_analyze(const RunConfig& c, json& out) {
  MultiPoly P = config_operator(c);
  HypothesisReport rep = hypotheses_report(P, c.seed);
  out["operator"] = P.to_string();
  out["hypotheses"] = rep.to_json();
  if (rep.ed_noncharacteristic) {
    SlabDecomposition dec = slab_decompose(P);
    out["decomposition"] = dec.to_json();
  }
  return rep.all_hold() ? 0 : 2;
}

// ---- cauchy

std::vector<CauchyData> parse_data(const RunConfig& c, const SlabDecomposition& dec, Mode mode) {
  std::vector<CauchyData> h(static_cast<std::size_t>(dec.m), CauchyData::zero(dec.dim - 1, mode));
  std::vector<bool> seen(h.size(), false);
  for (const auto& item : c.data) {
    auto eq = item.find('=');
    require(eq != std::string::npos && eq >= 2 && item[0] == 'h', ErrorCode::invalid_argument,
            "data entries look like hJ=EXPR, got '" + item + "'");
    int jdx = -1;
    try {
      std::size_t used = 0;
      std::string num = item.substr(1, eq - 1);
      jdx = std::stoi(num, &used);
      if (used != num.size()) jdx = -1;
    } catch (const std::exception&) {
    }
    require(jdx >= 0 && jdx < dec.m, ErrorCode::invalid_argument,
            "data index in '" + item + "' must be between 0 and " + std::to_string(dec.m - 1));
    require(!seen[jdx], ErrorCode::invalid_argument, "h" + std::to_string(jdx) + " given twice");
    seen[jdx] = true;
    h[jdx] = CauchyData::parse(item.substr(eq + 1), dec.dim - 1, mode);
  }
  return h;
}

int cmd_cauchy(const RunConfig& c, json& out) {
  Mode mode = config_mode(c);
  MultiPoly P = config_operator(c);
  SlabDecomposition dec = slab_decompose(P);
  std::vector<CauchyData> h = parse_data(c, dec, mode);
  const int n = c.n < 0 ? 20 : c.n;
  require(n >= dec.m, ErrorCode::invalid_argument, "truncation n must be at least m = " + std::to_string(dec.m));
  CauchySolution sol = cauchy_solve(dec, h, n);
  out["operator"] = P.to_string();
  out["hypotheses"] = hypotheses_or_note(P, c.seed);
  out["data"] = json::array();
  for (auto& f : h) out["data"].push_back(f.to_string());
  out["solution"] = sol.summary();

  bool ok = true;
  // preparation identity and traces, for s < m
  json ident = json::array();
  double max_res = 0;
  bool all_exact = true;
  for (int s = 0; s < dec.m; ++s) {
    CauchyData res = verify_prep_identity(dec, h, s);
    bool exact = res.is_zero();
    bool trace_ok = sol.trace(s) == h[s];
    all_exact = all_exact && exact && trace_ok;
    // sampled size of a nonzero residual on [-1, 1]^(d-1)
    if (!exact)
      for (int q = 0; q < 64; ++q) {
        std::vector<double> x(static_cast<std::size_t>(dec.dim - 1));
        for (std::size_t t = 0; t < x.size(); ++t) x[t] = -1.0 + 2.0 * ((q >> (3 * t)) % 8) / 7.0;
        max_res = std::max(max_res, std::abs(res.evaluate(x).value));
      }
    ident.push_back({{"s", s}, {"exact", exact}, {"trace_matches_data", trace_ok}, {"residual", res.to_string()}});
  }
  ok = all_exact;
  out["identity"] = {{"l_range", {0, dec.m - 1}}, {"exact", all_exact}, {"max_abs_residual", max_res}, {"checks", ident}};

  if (auto u = sol.as_polynomial()) {
    CauchyData r = CauchyData::poly(*u).apply_operator(dec.original.to_mode(u->mode()));
    out["null_residual"] = {{"exact", r.is_zero()}, {"residual", r.to_string()}};
    ok = ok && r.is_zero();
  }

  if (c.verify_explicit) {
    json mism = json::array();
    for (int j = 0; j < dec.m; ++j) {
      if (h[j].is_zero()) continue;
      for (int l = 0; l <= c.lmax; ++l)
        if (!(c_op_recursive(dec, l, h[j]) == c_op_explicit(dec, l, h[j]))) mism.push_back({{"j", j}, {"l", l}});
    }
    out["explicit_formula"] = {{"l_range", {0, c.lmax}}, {"exact", mism.empty()}, {"mismatches", mism}};
    ok = ok && mism.empty();
  }

  if (dec.dim == 2) {
    Grid2 grid = Grid2::parse(c.grid.empty() ? "-1:1:-1:1:0.1" : c.grid);
    Field f;
    f.grid = grid;
    for (int i = 0; i < grid.n1(); ++i)
      for (int jj = 0; jj < grid.n2(); ++jj) {
        double xp = grid.x1(i);
        Estimate e = sol.evaluate(std::span<const double>(&xp, 1), grid.x2(jj));
        f.value.push_back(e.value);
        f.error.push_back(e.error);
      }
    out["grid"] = grid.to_json();
    out["max_abs"] = f.max_abs();
    if (!c.csv.empty()) write_text(c.csv, f.to_csv());
    if (!c.matrix.empty()) write_text(c.matrix, f.to_matrix());
  } else {
    require(c.csv.empty() && c.matrix.empty(), ErrorCode::invalid_argument, "grid output is available for d = 2 only");
  }
  return ok ? 0 : 2;
}

// ---- null-solution

json columns_outside(const SupportReport& rep, double lo, double hi) {
  json bad = json::array();
  for (auto& col : rep.columns)
    if ((col.x1 < lo || col.x1 > hi) && col.label != "negligible") bad.push_back(col.x1);
  return bad;
}

int cmd_null_solution(const RunConfig& c, json& out) {
  MultiPoly P = config_operator(c);
  require(P.dim() == 2, ErrorCode::invalid_argument, "null solutions are built for d = 2");
  SlabDecomposition dec = slab_decompose(P);
  ContourSpec cs;
  cs.tau = c.tau;
  cs.r = c.r;
  cs.tol = c.quad_tol;
  cs.threads = c.threads;
  out["operator"] = P.to_string();

  if (c.v_only) {
    Grid2 grid = Grid2::parse(c.grid.empty() ? "-2:1:-2:2:0.1" : c.grid);
    HormanderV v(dec, cs);
    Field f = v.sample(grid);
    SupportReport sup = support_report(f, c.tol_rel);
    out["hypotheses"] = hypotheses_or_note(P, c.seed);
    out["contour"] = v.info();
    out["support"] = sup.to_json();
    // the half-space {x1 <= 0}, with one grid step of slack
    json bad = columns_outside(sup, -INFINITY, grid.h + 1e-12);
    bool some = false;
    for (auto& col : sup.columns) some = some || (col.x1 < 0 && col.label == "significant");
    out["check"] = {{"expected_support", "x1 <= 0"}, {"slack", grid.h}, {"violating_columns", bad},
                    {"significant_in_half_space", some}};
    if (!c.csv.empty()) write_text(c.csv, f.to_csv());
    if (!c.matrix.empty()) write_text(c.matrix, f.to_matrix());
    return bad.empty() && some ? 0 : 2;
  }

  SlabSpec spec;
  spec.a = c.a;
  spec.eps = c.eps;
  spec.rho = c.rho;
  spec.n = c.n < 0 ? 80 : c.n;
  if (!c.grid.empty()) spec.grid = Grid2::parse(c.grid);
  spec.contour = cs;
  spec.tol_rel = c.tol_rel;
  SlabSolutionRun run = slab_solution(dec, spec);
  out["result"] = run.summary();
  const double hstep = spec.grid.h;
  json bad = columns_outside(run.support, -(spec.a + spec.eps) - hstep - 1e-12, hstep + 1e-12);
  bool some = false;
  for (auto& col : run.support.columns)
    some = some || (col.x1 >= -spec.a - 1e-12 && col.x1 <= -spec.eps + 1e-12 && col.label == "significant");
  out["check"] = {{"expected_support", {-(spec.a + spec.eps), 0.0}},
                  {"slack", hstep},
                  {"violating_columns", bad},
                  {"significant_in_strip", some}};
  if (!c.csv.empty()) write_text(c.csv, run.field.to_csv());
  if (!c.matrix.empty()) write_text(c.matrix, run.field.to_matrix());
  return bad.empty() && some ? 0 : 2;
}

// ---- geometry

void write_overlay(const RunConfig& c, const GridDomain& g, const Verdict& v) {
  if (c.overlay.empty()) return;
  require(g.dim == 2, ErrorCode::invalid_argument, "overlays are drawn for 2D domains");
  int slice = -1;
  if (v.witness.contains("slice")) slice = slice_index(g, v.witness["slice"].get<double>());
  write_pgm(c.overlay, overlay(g, v.witness_cells, slice));
}

int verdict_code(const Verdict& v) { return v.outcome == "pass" ? 0 : 2; }

int cmd_runge(const RunConfig& c, json& out) {
  require(!c.x1.empty() && !c.x2.empty(), ErrorCode::invalid_argument, "runge-check needs --x1 and --x2");
  GridDomain X1 = load_domain(c.x1, c);
  GridDomain X2 = load_domain(c.x2, c);
  if (!c.op.empty() || !c.poly.empty()) out["hypotheses"] = hypotheses_or_note(config_operator(c), c.seed);
  out["X1"] = X1.to_json();
  out["X2"] = X2.to_json();
  Verdict v = runge_pair_check(X1, X2, {c.threads, c.qc_tol});
  out["verdict"] = v.to_json();
  write_overlay(c, X1, v);
  return verdict_code(v);
}

int cmd_pconvex(const RunConfig& c, json& out) {
  require(!c.domain.empty(), ErrorCode::invalid_argument, "pconvex-check needs --domain");
  GridDomain X = load_domain(c.domain, c);
  if (!c.op.empty() || !c.poly.empty()) out["hypotheses"] = hypotheses_or_note(config_operator(c), c.seed);
  out["X"] = X.to_json();
  Verdict v = p_convexity_check(X, {c.threads, c.qc_tol});
  out["verdict"] = v.to_json();
  write_overlay(c, X, v);
  return verdict_code(v);
}

int cmd_tube(const RunConfig& c, json& out) {
  require(!c.x1.empty() && !c.x2.empty() && !c.i1.empty() && !c.i2.empty(), ErrorCode::invalid_argument,
          "tube-check needs --i1, --x1, --i2 and --x2");
  Interval I1 = parse_interval(c.i1, "i1"), I2 = parse_interval(c.i2, "i2");
  GridDomain X1 = load_domain(c.x1, c);
  GridDomain X2 = load_domain(c.x2, c);
  if (!c.op.empty() || !c.poly.empty()) out["hypotheses"] = hypotheses_or_note(config_operator(c), c.seed);
  out["X1n"] = X1.to_json();
  out["X2n"] = X2.to_json();
  Verdict v = tube_check(I1, X1, I2, X2);
  out["verdict"] = v.to_json();
  if (!c.overlay.empty()) {
    require(X1.dim == 2, ErrorCode::invalid_argument, "overlays are drawn for 2D domains");
    write_pgm(c.overlay, overlay(X1, v.witness_cells, -1));
  }
  return verdict_code(v);
}

}  // namespace

MultiPoly config_operator(const RunConfig& c) {
  require(!c.poly.empty() || !c.op.empty(), ErrorCode::invalid_argument, "an operator is required (--poly or --op)");
  std::string text = c.poly.empty() ? preset_polynomial(c.op) : c.poly;
  int d = named_dim(text);
  require(d >= 1, ErrorCode::invalid_argument, "the operator names no variable x1, x2, ...");
  return parse_poly(text, d, config_mode(c));
}

GridDomain load_domain(const std::string& source, const RunConfig& c) {
  require(!source.empty(), ErrorCode::invalid_argument, "empty domain source");
  std::size_t first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && source[first] == '{') return rasterize_text(source);
  if (has_suffix(source, ".png") || has_suffix(source, ".pgm"))
    return mask_domain(read_image(source), c.mask_origin[0], c.mask_origin[1], c.mask_h, c.mask_threshold);
  return rasterize_text(read_text(source));
}

CommandResult run_command(const RunConfig& c) {
  CommandResult res;
  json body;
  if (c.command == "analyze")
    res.exit_code = cmd_analyze(c, body);
  else if (c.command == "cauchy")
    res.exit_code = cmd_cauchy(c, body);
  else if (c.command == "null-solution")
    res.exit_code = cmd_null_solution(c, body);
  else if (c.command == "runge-check")
    res.exit_code = cmd_runge(c, body);
  else if (c.command == "pconvex-check")
    res.exit_code = cmd_pconvex(c, body);
  else if (c.command == "tube-check")
    res.exit_code = cmd_tube(c, body);
  else
    fail(ErrorCode::invalid_argument, "unknown command '" + c.command + "'");
  res.report = {{"version", kVersion},
                {"config", c.to_json()},
                {"status", res.exit_code == 0 ? "pass" : "fail"},
                {"exit_code", res.exit_code},
                {"result", body}};
  if (!c.report.empty()) write_text(c.report, res.report.dump(2) + "\n");
  return res;
}

}  // namespace ka
