/* kw: solvers and a-priori-bound diagnostics for the generalized
 * Kazdan-Warner equation
 *
 *     Laplacian(u) - <du, theta> - S - A e^{alpha u} + B e^{-beta u} = 0
 *
 * on uniformly discretized flat tori of unit volume (periods multiply to 1),
 * with d* theta = 0 discretely. Fields are stored row-major with the last
 * axis fastest; the node with indices (j_1..j_n) sits at coordinates
 * (j_i * L_i / N_i).
 *
 * All objects are opaque handles created and released through this API.
 * Functions return KW_OK on success; on failure they return a status code
 * and leave a human-readable message in kw_last_error_message() (per
 * thread). Output parameters are untouched on failure. Handles returned
 * through out-parameters are owned by the caller and must be released with
 * the matching *_release function; const double* views borrow from their
 * handle and stay valid until it is released.
 */

#ifndef KW_KW_H
#define KW_KW_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kw_status {
  KW_OK = 0,
  KW_ERR_INVALID_ARGUMENT = 1,
  KW_ERR_GRID_MISMATCH = 2,
  KW_ERR_HYPOTHESIS = 3,      /* problem data violates the solvability hypotheses */
  KW_ERR_INCOMPATIBLE_RHS = 4,
  KW_ERR_NO_CONVERGENCE = 5,
  KW_ERR_OVERFLOW = 6,        /* exponential argument out of range */
  KW_ERR_IO = 7,
  KW_ERR_BARRIER = 8,         /* barrier invariants violated */
  KW_ERR_MONOTONICITY = 9,    /* ordering of the monotone scheme broke down */
  KW_ERR_INTERNAL = 10
} kw_status;

const char* kw_status_name(kw_status status);
/* Message describing the most recent failure on this thread. */
const char* kw_last_error_message(void);

/* -- grids ---------------------------------------------------------------- */

typedef struct kw_grid kw_grid;

/* dim in {1,2,3}; points[i] >= 4; periods multiply to 1. */
kw_status kw_grid_create(int dim, const int* points, const double* periods,
                         kw_grid** out);
void kw_grid_release(kw_grid* grid);
int kw_grid_dim(const kw_grid* grid);
int kw_grid_points(const kw_grid* grid, int axis);
double kw_grid_period(const kw_grid* grid, int axis);
double kw_grid_spacing(const kw_grid* grid, int axis);
double kw_grid_node_weight(const kw_grid* grid);
int64_t kw_grid_node_count(const kw_grid* grid);
int kw_grid_equal(const kw_grid* a, const kw_grid* b);

/* -- scalar fields ---------------------------------------------------------- */

typedef struct kw_field kw_field;

kw_status kw_field_zeros(const kw_grid* grid, kw_field** out);
kw_status kw_field_fill(const kw_grid* grid, double value, kw_field** out);
/* n must equal the node count; values must be finite. */
kw_status kw_field_from_values(const kw_grid* grid, const double* values,
                               int64_t n, kw_field** out);
void kw_field_release(kw_field* field);
int64_t kw_field_size(const kw_field* field);
/* Borrowed view of the node values. */
const double* kw_field_data(const kw_field* field);
/* New grid handle sharing the field's grid. */
kw_status kw_field_grid(const kw_field* field, kw_grid** out);
double kw_field_min(const kw_field* field);
double kw_field_max(const kw_field* field);
kw_status kw_field_max_abs_diff(const kw_field* a, const kw_field* b, double* out);

/* Text dump: "dims ...", "periods ...", then one value per line at 17
 * significant digits. Reading reconstructs the grid from the header. */
kw_status kw_field_write(const kw_field* field, const char* path);
kw_status kw_field_read(const char* path, kw_field** out);

/* -- drift 1-forms ----------------------------------------------------------- */

typedef struct kw_drift kw_drift;

kw_status kw_drift_zero(const kw_grid* grid, kw_drift** out);
/* components: one entry per axis. */
kw_status kw_drift_constant(const kw_grid* grid, const double* components,
                            kw_drift** out);
/* theta = (D_y psi, -D_x psi) on a 2D grid; divergence-free by construction. */
kw_status kw_drift_stream2d(const kw_field* psi, kw_drift** out);
/* Arbitrary components; max |div theta| is reported by validation. */
kw_status kw_drift_from_components(const kw_field* const* components, int n,
                                   kw_drift** out);
void kw_drift_release(kw_drift* drift);
kw_status kw_drift_max_divergence(const kw_drift* drift, double* out);

/* -- discrete operators ------------------------------------------------------- */

kw_status kw_laplacian(const kw_field* u, kw_field** out);
kw_status kw_drift_term(const kw_field* u, const kw_drift* theta, kw_field** out);
/* L u = laplacian(u) - drift_term(u, theta). */
kw_status kw_apply_L(const kw_field* u, const kw_drift* theta, kw_field** out);
kw_status kw_divergence(const kw_drift* theta, kw_field** out);
kw_status kw_integrate(const kw_field* f, double* out);
/* p >= 1, or HUGE_VAL for the sup norm. */
kw_status kw_lp_norm(const kw_field* f, double p, double* out);
/* Mean-zero solve of L u = f; |integral f| must be <= 1e-10. */
kw_status kw_solve_linear_L(const kw_field* f, const kw_drift* theta,
                            double tol, kw_field** out);
/* CFL bound for the explicit flow scheme: 0.9 / sum_i(2 / h_i^2). */
kw_status kw_explicit_stability_dt(const kw_grid* grid, double* out);

/* -- problem data -------------------------------------------------------------- */

typedef struct kw_problem kw_problem;

/* theta may be NULL for theta = 0. alpha, beta > 0. */
kw_status kw_problem_create(const kw_field* S, const kw_field* A,
                            const kw_field* B, double alpha, double beta,
                            const kw_drift* theta, kw_problem** out);
void kw_problem_release(kw_problem* problem);

typedef struct kw_hypothesis_report {
  int strict;  /* mode the report was evaluated under */
  int passed;
  int a_nonnegative;          /* min A >= 0 */
  int a_not_identically_zero; /* max A > 1e-12 */
  int b_nonnegative;          /* min B >= 0 */
  int s_mean_negative;        /* integral of S < 0 */
  int theta_coclosed;         /* max |div theta| <= 1e-10 */
  int a_strictly_positive;    /* strict mode only; 1 otherwise */
  double s_mean;
  double a_min;
  double a_max;
  double b_min;
  double theta_max_divergence;
} kw_hypothesis_report;

kw_status kw_problem_validate(const kw_problem* problem, int strict,
                              kw_hypothesis_report* out);

/* L u - S - A e^{alpha u} + B e^{-beta u}. */
kw_status kw_residual(const kw_problem* problem, const kw_field* u,
                      kw_field** out);

/* Defines S so that u_star solves the equation exactly on its grid. Fails
 * with KW_ERR_HYPOTHESIS when the resulting S has nonnegative integral. */
kw_status kw_manufacture(const kw_field* u_star, const kw_field* A,
                         const kw_field* B, double alpha, double beta,
                         const kw_drift* theta, kw_problem** out);

/* -- parabolic flow --------------------------------------------------------------- */

enum { KW_SCHEME_EXPLICIT = 0, KW_SCHEME_IMEX = 1 };

typedef struct kw_flow_config {
  int scheme;          /* KW_SCHEME_* */
  double dt;           /* <= 0 selects the automatic step size */
  double residual_tol; /* convergence threshold on sup |du/dt| */
  double max_time;
  int trace_stride;    /* sample the trace every this many steps */
  int record_snapshots; /* keep (t, u) pairs for barrier verification */
} kw_flow_config;

typedef struct kw_flow_result kw_flow_result;

kw_status kw_flow_step(const kw_field* u, const kw_problem* problem, double dt,
                       int scheme, kw_field** out);
kw_status kw_run_flow(const kw_problem* problem, const kw_field* u0,
                      const kw_flow_config* config, kw_flow_result** out);
void kw_flow_result_release(kw_flow_result* result);
int kw_flow_result_converged(const kw_flow_result* result);
int kw_flow_result_steps(const kw_flow_result* result);
double kw_flow_result_dt(const kw_flow_result* result);
double kw_flow_result_final_time(const kw_flow_result* result);
double kw_flow_result_final_residual(const kw_flow_result* result);
kw_status kw_flow_result_solution(const kw_flow_result* result, kw_field** out);

enum {
  KW_TRACE_TIME = 0,
  KW_TRACE_SUP_UT = 1,
  KW_TRACE_MIN_U = 2,
  KW_TRACE_MAX_U = 3,
  KW_TRACE_ENERGY = 4 /* only when theta = 0 */
};

int64_t kw_flow_result_trace_length(const kw_flow_result* result);
int kw_flow_result_has_energy(const kw_flow_result* result);
/* Copies one trace column into out (trace_length entries). */
kw_status kw_flow_result_trace_column(const kw_flow_result* result, int column,
                                      double* out);
/* Nonincreasing within 1e-10 * (1 + |value|) between samples. */
kw_status kw_flow_result_sup_ut_monotone(const kw_flow_result* result, int* out);
kw_status kw_flow_result_energy_monotone(const kw_flow_result* result, int* out);
/* CSV columns t, sup_ut, energy (empty when theta != 0), min_u, max_u. */
kw_status kw_flow_result_write_trace_csv(const kw_flow_result* result,
                                         const char* path);

/* Integral of 1/2 |grad u|^2 + S u + (A/alpha) e^{alpha u} + (B/beta) e^{-beta u};
 * requires theta = 0. The flow dissipates this functional. */
kw_status kw_energy(const kw_problem* problem, const kw_field* u, double* out);

typedef struct kw_barrier_report {
  int pass;
  double worst_margin; /* min over samples of phi(t) + slack - max(-u + w) */
  double c0;
  double phi_limit;    /* limit of phi as t -> infinity */
  double s_bar;
  double sup_w;
  int samples;
} kw_barrier_report;

/* Checks max(-u(t) + w) <= phi(t) + slack at every recorded snapshot, where
 * w solves L w = S - mean(S) and phi is the scalar comparison-ODE barrier.
 * The flow must have been run with record_snapshots = 1. slack <= 0 selects
 * the default 1e-6. */
kw_status kw_flow_verify_barrier(const kw_flow_result* result,
                                 const kw_problem* problem, const kw_field* u0,
                                 double slack, kw_barrier_report* out);

/* Closed form of the barrier ODE d(phi)/dt = s_bar + sup_A e^{alpha sup_w}
 * e^{-alpha phi}, phi(0) = c0; requires s_bar < 0 and c0 above the ODE's
 * stationary value so the log argument stays positive. */
kw_status kw_barrier_phi(double t, double alpha, double s_bar, double sup_a,
                         double sup_w, double c0, double* out);

/* Classical fixed-step RK4 for d(phi)/dt = F(phi, t), phi(0) = c0. Writes
 * ceil(T/dt)+1 samples; capacity must be at least that. */
kw_status kw_comparison_ode_solve(double (*F)(double phi, double t, void* ctx),
                                  void* ctx, double c0, double T, double dt,
                                  double* t_out, double* phi_out,
                                  int64_t capacity, int64_t* count);

/* Least-squares slope of log(sup_ut^2) vs t over trace samples in [t_a, t_b];
 * needs at least 5 positive samples. */
kw_status kw_fit_decay_rate(const kw_flow_result* result, double t_a, double t_b,
                            double* rate);

/* -- stationary solvers -------------------------------------------------------------- */

/* Damped Newton iteration; u0 may be NULL for the zero initial guess. */
kw_status kw_newton_solve(const kw_problem* problem, const kw_field* u0,
                          double tol, int max_iter, kw_field** u_out,
                          int* iterations, int* converged,
                          double* final_residual);

typedef struct kw_upper_lower kw_upper_lower;

typedef struct kw_upper_lower_info {
  double a, b, m;
  double s_bar, a_bar;
  double c1, c2;                /* min v1, min v2 */
  double sup_residual_plus;     /* <= -1e-8: u_plus is a supersolution */
  double min_residual_minus;    /* >= +1e-8: u_minus is a subsolution */
} kw_upper_lower_info;

/* Builds u_plus = v1 + a v2 + b and u_minus = v1 - m with automatic (a, b, m)
 * unless overridden (pass NULL to auto-select); overrides are validated
 * against their constraints. */
kw_status kw_upper_lower_build(const kw_problem* problem, const double* a,
                               const double* b, const double* m,
                               kw_upper_lower** out);
void kw_upper_lower_release(kw_upper_lower* ul);
kw_status kw_upper_lower_info_get(const kw_upper_lower* ul,
                                  kw_upper_lower_info* out);

enum {
  KW_UL_U_PLUS = 0,
  KW_UL_U_MINUS = 1,
  KW_UL_V1 = 2,
  KW_UL_V2 = 3
};

kw_status kw_upper_lower_field(const kw_upper_lower* ul, int which,
                               kw_field** out);

/* Monotone iteration from u_plus; iterates decrease pointwise and stay above
 * u_minus (verified with 1e-10 slack; violations fail with
 * KW_ERR_MONOTONICITY). Stops when ||u_{k+1} - u_k||_inf <= tol. */
kw_status kw_monotone_solve(const kw_problem* problem, const kw_upper_lower* ul,
                            double tol, int max_iter, kw_field** u_out,
                            int* iterations, int* converged, int* monotone,
                            double* final_residual);

/* Max pairwise sup-norm difference between n >= 2 solutions. */
kw_status kw_cross_validate(const kw_field* const* solutions, int n, double tol,
                            double* max_diff, int* pass);

/* -- a-priori bounds ------------------------------------------------------------------- */

/* Maximum-principle lower bound: any solution satisfies u >= min(w) - t0 = -C,
 * where w solves L w = S - mean(S). w_out may be NULL. */
kw_status kw_lower_bound(const kw_problem* problem, double* C, double* t0,
                         kw_field** w_out);
/* L2 bound sqrt(C^2 + (144/alpha^6) eta^{-2} |S|_2^2 + (C_tilde (144/alpha^6)
 * eta^{-2} + 3)), eta = min A > 0, C_tilde = e^{beta C} max B. */
kw_status kw_l2_upper_bound(const kw_problem* problem, double C, double* out);

typedef struct kw_bounds_report {
  double lower_bound_c; /* the guarantee reads u >= -C */
  double t0;
  double w_sup_norm;
  double eta;
  double c_tilde;
  double l2_bound;      /* NaN when the L2 bound was skipped */
  double min_u;
  double l2_norm_u;
  int lower_pass;
  double lower_margin;
  int l2_evaluated;     /* 0 when min A <= 0 (weak hypotheses only) */
  int l2_pass;
  double l2_margin;
  int passed;
} kw_bounds_report;

/* Report-only verification of the bounds against a computed solution.
 * slack <= 0 selects the default 1e-6. */
kw_status kw_verify_solution_bounds(const kw_problem* problem, const kw_field* u,
                                    double slack, kw_bounds_report* out);

/* ||u||_{L^{p0 2^k}} for k = 0..levels into out (levels + 1 entries). */
kw_status kw_norm_ladder(const kw_field* u, double p0, int levels, double* out);

#ifdef __cplusplus
}
#endif

#endif /* KW_KW_H */
