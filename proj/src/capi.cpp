#include "kernapprox/kernapprox.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "cauchy.hpp"
#include "commands.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "hormander.hpp"
#include "image_io.hpp"
#include "slab.hpp"
#include "slab_solution.hpp"

struct ka_poly {
  ka::MultiPoly p;
};
struct ka_decomposition {
  ka::SlabDecomposition dec;
};
struct ka_cauchy_solution {
  ka::CauchySolution sol;
};
struct ka_null_solution {
  std::unique_ptr<ka::HormanderV> v;
};
struct ka_slab_run {
  ka::SlabSolutionRun run;
};
struct ka_domain {
  ka::GridDomain g;
};

namespace {

thread_local std::string last_error;

ka_status set_error(ka_status st, const std::string& msg) {
  last_error = msg;
  return st;
}

// Runs f, translating exceptions into status codes.
template <class F>
ka_status guard(F&& f) {
  try {
    f();
    return KA_OK;
  } catch (const ka::Error& e) {
    return set_error(static_cast<ka_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(KA_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(KA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(KA_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  ka::require(p != nullptr, ka::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

nlohmann::json parse_json_arg(const char* text) {
  if (!text) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    ka::fail(ka::ErrorCode::parse, std::string("malformed JSON: ") + e.what());
  }
}

int outcome_code(const ka::Verdict& v) {
  if (v.outcome == "pass") return 0;
  if (v.outcome == "fail") return 1;
  return 2;
}

ka_status verdict_out(const ka::Verdict& v, char** json_out, int* outcome) {
  if (json_out) *json_out = dup(v.to_json().dump());
  if (outcome) *outcome = outcome_code(v);
  return KA_OK;
}

}  // namespace

extern "C" {

const char* ka_version(void) { return ka::kVersion; }

const char* ka_last_error(void) { return last_error.c_str(); }

const char* ka_status_name(ka_status status) {
  switch (status) {
    case KA_OK: return "ok";
    case KA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case KA_ERR_PARSE: return "parse";
    case KA_ERR_PRECONDITION: return "precondition";
    case KA_ERR_NUMERIC: return "numeric";
    case KA_ERR_MODE: return "mode";
    case KA_ERR_IO: return "io";
    case KA_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void ka_string_free(char* s) { std::free(s); }

ka_status ka_poly_parse(const char* text, int dim, ka_mode mode, ka_poly** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    int d = dim > 0 ? dim : ka::named_dim(text);
    ka::require(d >= 1, ka::ErrorCode::invalid_argument, "cannot infer the dimension of '" + std::string(text) + "'");
    auto m = mode == KA_MODE_FLOATING ? ka::Mode::floating : ka::Mode::exact;
    *out = new ka_poly{ka::parse_poly(text, d, m)};
  });
}

ka_status ka_poly_preset(const char* name, ka_poly** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    std::string text = ka::preset_polynomial(name);
    *out = new ka_poly{ka::parse_poly(text, 2)};
  });
}

void ka_poly_free(ka_poly* p) { delete p; }

int ka_poly_dim(const ka_poly* p) { return p ? p->p.dim() : 0; }

int ka_poly_degree(const ka_poly* p) { return p ? p->p.degree() : -1; }

ka_status ka_poly_to_string(const ka_poly* p, char** out) {
  return guard([&] {
    need(p, "p");
    need(out, "out");
    *out = dup(p->p.to_string());
  });
}

ka_status ka_poly_hypotheses(const ka_poly* p, uint64_t seed, char** json_out, int* all_hold) {
  return guard([&] {
    need(p, "p");
    ka::HypothesisReport rep = ka::hypotheses_report(p->p, seed);
    if (json_out) *json_out = dup(rep.to_json().dump());
    if (all_hold) *all_hold = rep.all_hold() ? 1 : 0;
  });
}

ka_status ka_decompose(const ka_poly* p, ka_decomposition** out) {
  return guard([&] {
    need(p, "p");
    need(out, "out");
    *out = new ka_decomposition{ka::slab_decompose(p->p)};
  });
}

void ka_decomposition_free(ka_decomposition* dec) { delete dec; }

int ka_decomposition_order(const ka_decomposition* dec) { return dec ? dec->dec.m : 0; }

ka_status ka_decomposition_json(const ka_decomposition* dec, char** out) {
  return guard([&] {
    need(dec, "dec");
    need(out, "out");
    *out = dup(dec->dec.to_json().dump());
  });
}

ka_status ka_cauchy_solve(const ka_decomposition* dec, const char* const* data, int count, int n,
                          ka_cauchy_solution** out) {
  return guard([&] {
    need(dec, "dec");
    need(out, "out");
    const auto& D = dec->dec;
    ka::require(count >= 0 && count <= D.m, ka::ErrorCode::invalid_argument,
                "at most m = " + std::to_string(D.m) + " data may be given");
    ka::require(count == 0 || data != nullptr, ka::ErrorCode::invalid_argument, "data must not be null");
    std::vector<ka::CauchyData> h(static_cast<std::size_t>(D.m), ka::CauchyData::zero(D.dim - 1, D.mode()));
    for (int j = 0; j < count; ++j)
      if (data[j]) h[j] = ka::CauchyData::parse(data[j], D.dim - 1, D.mode());
    *out = new ka_cauchy_solution{ka::cauchy_solve(D, h, n)};
  });
}

void ka_cauchy_free(ka_cauchy_solution* sol) { delete sol; }

ka_status ka_cauchy_eval(const ka_cauchy_solution* sol, const double* xprime, double xd, double* re, double* im,
                         double* err) {
  return guard([&] {
    need(sol, "sol");
    int dp = sol->sol.dec.dim - 1;
    ka::require(dp == 0 || xprime != nullptr, ka::ErrorCode::invalid_argument, "xprime must not be null");
    ka::Estimate e = sol->sol.evaluate(std::span<const double>(xprime, static_cast<std::size_t>(dp)), xd);
    if (re) *re = e.value.real();
    if (im) *im = e.value.imag();
    if (err) *err = e.error;
  });
}

ka_status ka_cauchy_summary(const ka_cauchy_solution* sol, char** out) {
  return guard([&] {
    need(sol, "sol");
    need(out, "out");
    *out = dup(sol->sol.summary().dump());
  });
}

ka_status ka_cauchy_polynomial(const ka_cauchy_solution* sol, char** out) {
  return guard([&] {
    need(sol, "sol");
    need(out, "out");
    auto p = sol->sol.as_polynomial();
    ka::require(p.has_value(), ka::ErrorCode::precondition, "the series did not terminate for polynomial data");
    *out = dup(p->to_string());
  });
}

ka_status ka_cauchy_verify(const ka_cauchy_solution* sol, int s, int* exact) {
  return guard([&] {
    need(sol, "sol");
    need(exact, "exact");
    const auto& S = sol->sol;
    ka::require(s >= 0 && s < S.dec.m, ka::ErrorCode::invalid_argument, "s must lie in [0, m)");
    bool ok = ka::verify_prep_identity(S.dec, S.h, s).is_zero() && S.trace(s) == S.h[s];
    *exact = ok ? 1 : 0;
  });
}

ka_status ka_null_solution_new(const ka_decomposition* dec, const char* contour_json, ka_null_solution** out) {
  return guard([&] {
    need(dec, "dec");
    need(out, "out");
    ka::ContourSpec spec = ka::ContourSpec::from_json(parse_json_arg(contour_json));
    *out = new ka_null_solution{std::make_unique<ka::HormanderV>(dec->dec, spec)};
  });
}

void ka_null_solution_free(ka_null_solution* v) { delete v; }

ka_status ka_null_solution_eval(const ka_null_solution* v, double x1, double x2, int a1, int a2, double* re,
                                double* im, double* err) {
  return guard([&] {
    need(v, "v");
    ka::require(a1 >= 0 && a2 >= 0, ka::ErrorCode::invalid_argument, "derivative orders must be nonnegative");
    ka::Estimate e = v->v->evaluate(x1, x2, {a1, a2});
    if (re) *re = e.value.real();
    if (im) *im = e.value.imag();
    if (err) *err = e.error;
  });
}

ka_status ka_null_solution_sample(const ka_null_solution* v, const char* grid, double tol_rel, char** csv_out,
                                  char** support_json_out) {
  return guard([&] {
    need(v, "v");
    need(grid, "grid");
    ka::Field f = v->v->sample(ka::Grid2::parse(grid));
    std::string csv = csv_out ? f.to_csv() : std::string();
    std::string sup = support_json_out ? ka::support_report(f, tol_rel).to_json().dump() : std::string();
    if (csv_out) *csv_out = dup(csv);
    if (support_json_out) *support_json_out = dup(sup);
  });
}

ka_status ka_slab_solution_run(const ka_decomposition* dec, const char* spec_json, ka_slab_run** out) {
  return guard([&] {
    need(dec, "dec");
    need(out, "out");
    nlohmann::json j = parse_json_arg(spec_json);
    if (j.contains("grid") && j["grid"].is_string()) j["grid"] = ka::Grid2::parse(j["grid"]).to_json();
    *out = new ka_slab_run{ka::slab_solution(dec->dec, ka::SlabSpec::from_json(j))};
  });
}

void ka_slab_run_free(ka_slab_run* run) { delete run; }

ka_status ka_slab_run_summary(const ka_slab_run* run, char** out) {
  return guard([&] {
    need(run, "run");
    need(out, "out");
    *out = dup(run->run.summary().dump());
  });
}

ka_status ka_slab_run_csv(const ka_slab_run* run, char** out) {
  return guard([&] {
    need(run, "run");
    need(out, "out");
    *out = dup(run->run.field.to_csv());
  });
}

ka_status ka_domain_from_json(const char* spec_json, ka_domain** out) {
  return guard([&] {
    need(spec_json, "spec_json");
    need(out, "out");
    *out = new ka_domain{ka::rasterize_text(spec_json)};
  });
}

ka_status ka_domain_from_mask(const char* path, double lo1, double lo2, double h, int threshold, ka_domain** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new ka_domain{ka::mask_domain(ka::read_image(path), lo1, lo2, h, threshold)};
  });
}

void ka_domain_free(ka_domain* X) { delete X; }

ka_status ka_domain_info(const ka_domain* X, char** out) {
  return guard([&] {
    need(X, "X");
    need(out, "out");
    *out = dup(X->g.to_json().dump());
  });
}

ka_status ka_domain_count(const ka_domain* X, size_t* count) {
  return guard([&] {
    need(X, "X");
    need(count, "count");
    *count = X->g.count();
  });
}

ka_status ka_runge_pair_check(const ka_domain* X1, const ka_domain* X2, int threads, char** verdict_json,
                              int* outcome) {
  ka::Verdict v;
  ka_status st = guard([&] {
    need(X1, "X1");
    need(X2, "X2");
    v = ka::runge_pair_check(X1->g, X2->g, {std::max(1, threads), -1});
  });
  return st != KA_OK ? st : guard([&] { verdict_out(v, verdict_json, outcome); });
}

ka_status ka_pconvex_check(const ka_domain* X, int threads, double qc_tol, char** verdict_json, int* outcome) {
  ka::Verdict v;
  ka_status st = guard([&] {
    need(X, "X");
    v = ka::p_convexity_check(X->g, {std::max(1, threads), qc_tol});
  });
  return st != KA_OK ? st : guard([&] { verdict_out(v, verdict_json, outcome); });
}

ka_status ka_tube_check(double i1_lo, double i1_hi, const ka_domain* X1n, double i2_lo, double i2_hi,
                        const ka_domain* X2n, char** verdict_json, int* outcome) {
  ka::Verdict v;
  ka_status st = guard([&] {
    need(X1n, "X1n");
    need(X2n, "X2n");
    v = ka::tube_check({i1_lo, i1_hi}, X1n->g, {i2_lo, i2_hi}, X2n->g);
  });
  return st != KA_OK ? st : guard([&] { verdict_out(v, verdict_json, outcome); });
}

ka_status ka_domain_overlay(const ka_domain* X, double slice_x1, const char* path) {
  return guard([&] {
    need(X, "X");
    need(path, "path");
    int slice = std::isfinite(slice_x1) ? ka::slice_index(X->g, slice_x1) : -1;
    ka::write_pgm(path, ka::overlay(X->g, {}, slice));
  });
}

ka_status ka_run(const char* config_json, char** report_json, int* exit_code) {
  if (exit_code) *exit_code = 1;
  return guard([&] {
    need(config_json, "config_json");
    ka::RunConfig cfg = ka::RunConfig::from_json(parse_json_arg(config_json));
    ka::CommandResult res = ka::run_command(cfg);
    if (report_json) *report_json = dup(res.report.dump(2) + "\n");
    if (exit_code) *exit_code = res.exit_code;
  });
}

}  // extern "C"
