/* C interface to the kernapprox library.
 *
 * Objects are opaque handles created by ka_*_new / ka_*_parse style calls and
 * released with the matching ka_*_free. Every fallible call returns a
 * ka_status; on failure ka_last_error() describes the problem (per thread,
 * valid until the next failing call on that thread). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * ka_string_free. Complex values are split into real and imaginary parts.
 *
 * Operators are polynomials in x1..xd read as symbols of D = -i d/dx.
 */
#ifndef KERNAPPROX_H
#define KERNAPPROX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ka_status {
  KA_OK = 0,
  KA_ERR_INVALID_ARGUMENT = 1,
  KA_ERR_PARSE = 2,
  KA_ERR_PRECONDITION = 3,
  KA_ERR_NUMERIC = 4,
  KA_ERR_MODE = 5,
  KA_ERR_IO = 6,
  KA_ERR_INTERNAL = 99
} ka_status;

typedef enum ka_mode { KA_MODE_EXACT = 0, KA_MODE_FLOATING = 1 } ka_mode;

typedef struct ka_poly ka_poly;
typedef struct ka_decomposition ka_decomposition;
typedef struct ka_cauchy_solution ka_cauchy_solution;
typedef struct ka_null_solution ka_null_solution;
typedef struct ka_slab_run ka_slab_run;
typedef struct ka_domain ka_domain;

const char* ka_version(void);
const char* ka_last_error(void);
const char* ka_status_name(ka_status status);
void ka_string_free(char* s);

/* ---- operators */

/* dim = 0 takes the largest variable index named in the text */
ka_status ka_poly_parse(const char* text, int dim, ka_mode mode, ka_poly** out);
/* "heat" or "schrodinger" */
ka_status ka_poly_preset(const char* name, ka_poly** out);
void ka_poly_free(ka_poly* p);
int ka_poly_dim(const ka_poly* p);
int ka_poly_degree(const ka_poly* p);
ka_status ka_poly_to_string(const ka_poly* p, char** out);
/* hypothesis report as JSON; *all_hold (nullable) receives 1 when every hypothesis holds */
ka_status ka_poly_hypotheses(const ka_poly* p, uint64_t seed, char** json_out, int* all_hold);

/* P = lead * sum_k Q_k(x') x_d^k with Q_m = 1 */
ka_status ka_decompose(const ka_poly* p, ka_decomposition** out);
void ka_decomposition_free(ka_decomposition* dec);
int ka_decomposition_order(const ka_decomposition* dec);
ka_status ka_decomposition_json(const ka_decomposition* dec, char** out);

/* ---- Cauchy problem P(D)u = 0, D_d^j u(x', 0) = h_j */

/* data[j] is the text of h_j in x1..x_{d-1}; count <= m, missing entries are zero */
ka_status ka_cauchy_solve(const ka_decomposition* dec, const char* const* data, int count, int n,
                          ka_cauchy_solution** out);
void ka_cauchy_free(ka_cauchy_solution* sol);
/* xprime has d-1 entries */
ka_status ka_cauchy_eval(const ka_cauchy_solution* sol, const double* xprime, double xd, double* re, double* im,
                         double* err);
ka_status ka_cauchy_summary(const ka_cauchy_solution* sol, char** out);
/* u as polynomial text; KA_ERR_PRECONDITION when the series did not terminate */
ka_status ka_cauchy_polynomial(const ka_cauchy_solution* sol, char** out);
/* *exact receives 1 when the preparation identity and the trace D_d^s u(., 0) = h_s hold for s */
ka_status ka_cauchy_verify(const ka_cauchy_solution* sol, int s, int* exact);

/* ---- half-space null solution v of a two-variable operator */

/* contour_json may be NULL; keys tau, r, sigma_max, tol, panel_phase, branch, threads */
ka_status ka_null_solution_new(const ka_decomposition* dec, const char* contour_json, ka_null_solution** out);
void ka_null_solution_free(ka_null_solution* v);
/* D^alpha v at (x1, x2) */
ka_status ka_null_solution_eval(const ka_null_solution* v, double x1, double x2, int a1, int a2, double* re,
                                double* im, double* err);
/* samples on grid "X1MIN:X1MAX:X2MIN:X2MAX:H"; csv_out and support_json_out are nullable */
ka_status ka_null_solution_sample(const ka_null_solution* v, const char* grid, double tol_rel, char** csv_out,
                                  char** support_json_out);

/* spec_json may be NULL; keys a, eps, rho, n, grid, contour, tol_rel, margin_lo_frac, margin_hi_frac */
ka_status ka_slab_solution_run(const ka_decomposition* dec, const char* spec_json, ka_slab_run** out);
void ka_slab_run_free(ka_slab_run* run);
ka_status ka_slab_run_summary(const ka_slab_run* run, char** out);
ka_status ka_slab_run_csv(const ka_slab_run* run, char** out);

/* ---- rasterized domains */

/* {"dim":2,"window":{"lo":[..],"hi":[..]},"h":0.1,"shape":{...}} */
ka_status ka_domain_from_json(const char* spec_json, ka_domain** out);
/* gray image (.pgm or .png); pixels >= threshold are in the domain; bottom-left pixel center at (lo1, lo2) */
ka_status ka_domain_from_mask(const char* path, double lo1, double lo2, double h, int threshold, ka_domain** out);
void ka_domain_free(ka_domain* X);
ka_status ka_domain_info(const ka_domain* X, char** out);
ka_status ka_domain_count(const ka_domain* X, size_t* count);

/* verdicts as JSON; *outcome (nullable) receives 0 pass, 1 fail, 2 indeterminate */
ka_status ka_runge_pair_check(const ka_domain* X1, const ka_domain* X2, int threads, char** verdict_json, int* outcome);
/* qc_tol < 0 picks h/2 */
ka_status ka_pconvex_check(const ka_domain* X, int threads, double qc_tol, char** verdict_json, int* outcome);
ka_status ka_tube_check(double i1_lo, double i1_hi, const ka_domain* X1n, double i2_lo, double i2_hi,
                        const ka_domain* X2n, char** verdict_json, int* outcome);
/* PGM overlay of a 2D domain; slice_x1 is drawn when finite */
ka_status ka_domain_overlay(const ka_domain* X, double slice_x1, const char* path);

/* ---- whole runs */

/* Runs one command from a JSON run configuration (the keys of the report's
 * "config" object). Writes any output files named in it, returns the report
 * and the exit code 0 (pass) or 2 (fail). Errors leave *exit_code at 1. */
ka_status ka_run(const char* config_json, char** report_json, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
