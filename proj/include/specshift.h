/* specshift — numerical laboratory for spectral perturbation analysis.
 *
 * C API of the shared library.  All objects are opaque handles created and
 * destroyed through this interface; every function returns an ss_status and
 * writes results through out-parameters.  On failure the out-parameters are
 * left untouched and ss_last_error() carries a descriptive message
 * (thread-local).
 *
 * Matrices are dense complex square arrays, passed as interleaved doubles
 * (re, im, re, im, ...) in row-major order, 2*dim*dim values.
 *
 * Scalar functions are described by JSON:
 *   {"variant":"gaussian","terms":[{"coef":[re,im],"width":a,"center":b,"degree":k},...]}
 *   {"variant":"rational","terms":[{"coef":[re,im],"pole":[re,im],"order":m},...]}
 *   {"variant":"polynomial","coeffs":[c0,c1,...]}
 */

#ifndef SPECSHIFT_H
#define SPECSHIFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SS_API __declspec(dllexport)
#else
#define SS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_ARGUMENT = 1,
  SS_ERR_NOT_HERMITIAN = 2,
  SS_ERR_PARSE = 3,
  SS_ERR_UNSUPPORTED = 4,
  SS_ERR_POLE_PROXIMITY = 5,
  SS_ERR_STEP_SIZE = 6,
  SS_ERR_ENLARGE_TRUNCATION = 7,
  SS_ERR_BUDGET_EXCEEDED = 8,
  SS_ERR_CONVERGENCE = 9,
  SS_ERR_INCONSISTENCY = 10,
  SS_ERR_IO = 11,
  SS_ERR_INTERNAL = 12
} ss_status;

typedef struct ss_matrix ss_matrix;
typedef struct ss_function ss_function;
typedef struct ss_spectral ss_spectral;

/* ---- diagnostics ---- */
SS_API const char* ss_status_name(ss_status status);
SS_API const char* ss_last_error(void); /* thread-local; empty when no error */
SS_API void ss_string_free(char* text);
SS_API void ss_buffer_free(double* buffer);

/* ---- matrices ---- */
SS_API ss_status ss_matrix_create(int dim, const double* interleaved, ss_matrix** out);
/* validates hermiticity (tolerance 1e-12 * max|entry|) and symmetrizes */
SS_API ss_status ss_matrix_create_hermitian(int dim, const double* interleaved,
                                            ss_matrix** out);
SS_API ss_status ss_matrix_load_json(const char* path, ss_matrix** out);
SS_API ss_status ss_matrix_save_json(const ss_matrix* m, const char* path);
/* ensemble: "gue" | "ginibre" | "haar" | "weak_profile:<p>" */
SS_API ss_status ss_matrix_random(const char* ensemble, int dim, uint64_t seed,
                                  ss_matrix** out);
SS_API int ss_matrix_dim(const ss_matrix* m);
SS_API ss_status ss_matrix_get(const ss_matrix* m, double* interleaved_out);
SS_API void ss_matrix_free(ss_matrix* m);

/* ---- scalar functions ---- */
SS_API ss_status ss_function_create(const char* json_or_preset, ss_function** out);
SS_API ss_status ss_function_eval_derivative(const ss_function* f, double x, int order,
                                             double* re, double* im);
SS_API ss_status ss_function_sup_derivative(const ss_function* f, int order, double* out);
SS_API ss_status ss_function_fourier(const ss_function* f, double t, double* re, double* im);
SS_API void ss_function_free(ss_function* f);

/* ---- spectral decomposition / functional calculus ---- */
SS_API ss_status ss_spectral_compute(const ss_matrix* h, double cluster_tol,
                                     ss_spectral** out);
SS_API int ss_spectral_cluster_count(const ss_spectral* s);
/* eigenvalues: cluster_count entries; multiplicities likewise */
SS_API ss_status ss_spectral_eigenvalues(const ss_spectral* s, double* eigenvalues,
                                         int* multiplicities);
SS_API ss_status ss_spectral_projection(const ss_spectral* s, int cluster, ss_matrix** out);
SS_API void ss_spectral_free(ss_spectral* s);

SS_API ss_status ss_apply_function(const ss_function* f, const ss_matrix* h, ss_matrix** out);
SS_API ss_status ss_resolvent_power(const ss_matrix* h, double z_re, double z_im, int power,
                                    ss_matrix** out);
SS_API ss_status ss_unitary_exp(const ss_matrix* h, double t, ss_matrix** out);

/* ---- divided differences ----
 * route: "recursive" | "rational" | "simplex" | "fourier"
 * level/truncation apply to "fourier"; tol to "simplex".
 * err_out (optional): quadrature error estimate or certified lattice tail. */
SS_API ss_status ss_divdiff(const ss_function* f, const double* lambda, int count,
                            const char* route, int level, double truncation, double tol,
                            double* re, double* im, double* err_out);
/* phi(l0..l_{n-1}) = -i f^[n](l0,l0,l1..); returns both routes */
SS_API ss_status ss_phi_eval(const ss_function* f, const double* lambda, int count,
                             double* re, double* im, double* discrepancy);

/* ---- multiple operator integrals ----
 * symbol: "divdiff" | "phi"; args are the n (or n-1) argument matrices. */
SS_API ss_status ss_moi_spectral(const ss_function* f, const char* symbol, int order,
                                 const ss_matrix* h, const ss_matrix* const* args,
                                 int arg_count, ss_matrix** out);
/* level_errors/level_norms must hold m_max doubles when non-NULL.  Unlike the
 * other calls this one fills its outputs even when it returns
 * SS_ERR_CONVERGENCE, so the per-level diagnostics stay inspectable. */
SS_API ss_status ss_moi_dyadic(const ss_function* f, const char* symbol, int order,
                               const ss_matrix* h, const ss_matrix* const* args,
                               int arg_count, int m_max, double truncation, double tol,
                               ss_matrix** value_out, double* level_errors,
                               double* level_norms, double* tail_bound,
                               double* fitted_order);

/* ---- ideal norms ---- */
SS_API ss_status ss_singular_values(const ss_matrix* m, double* out /* dim */);
/* kind: "schatten" | "weak" | "lorentz" | "dixmier" | "dmconvex" */
SS_API ss_status ss_ideal_norm(const ss_matrix* m, const char* kind, double p, double q,
                               double* out);

/* ---- perturbation lab ---- */
SS_API ss_status ss_gateaux_moi(const ss_function* f, const ss_matrix* h, const ss_matrix* v,
                                int order, ss_matrix** out);
SS_API ss_status ss_gateaux_fd(const ss_function* f, const ss_matrix* h, const ss_matrix* v,
                               int order, double step /* <=0: auto */, ss_matrix** out);
SS_API ss_status ss_resolvent_derivative(double z_re, double z_im, int power,
                                         const ss_matrix* h, const ss_matrix* v, int order,
                                         ss_matrix** out);
SS_API ss_status ss_taylor_remainder(const ss_function* f, const ss_matrix* h,
                                     const ss_matrix* v, int order, ss_matrix** out);
/* breakpoints/values allocated with one extra slot convention:
 * *count breakpoints, *count - 1 interval values; free with ss_buffer_free */
SS_API ss_status ss_krein_ssf(const ss_matrix* h, const ss_matrix* v, double** breakpoints,
                              double** values, int* count);
SS_API ss_status ss_krein_residual(const ss_function* f, const ss_matrix* h,
                                   const ss_matrix* v, double* residual, double* scale);
SS_API ss_status ss_cyclic_residual(const ss_function* f, const ss_matrix* h,
                                    const ss_matrix* v, int order, double* residual);

/* ---- batch runner ----
 * config_json: {"subcommand": "...", ...}; subcommands: divdiff, moi, deriv,
 * remainder, ssf, cyclic, scan, norms, propcheck, interp.  On success
 * *report_json receives a malloc'd JSON report (free with ss_string_free);
 * *pass receives 1 when every declared tolerance held.  A report is also
 * produced for tolerance failures (status SS_OK, *pass = 0). */
SS_API ss_status ss_run_json(const char* config_json, char** report_json, int* pass);

SS_API const char* ss_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SPECSHIFT_H */
