#include "kw/kw.h"

#include <cmath>
#include <cstring>
#include <string>

#include "elliptic.hpp"
#include "estimates.hpp"
#include "field_io.hpp"
#include "flow.hpp"
#include "linsolve.hpp"
#include "manifold.hpp"
#include "problem.hpp"

struct kw_grid {
  kw::GridPtr grid;
};
struct kw_field {
  kw::ScalarField field;
};
struct kw_drift {
  kw::DriftForm drift;
};
struct kw_problem {
  kw::ProblemData problem;
};
struct kw_flow_result {
  kw::FlowResult result;
};
struct kw_upper_lower {
  kw::UpperLowerData data;
};

namespace {

thread_local std::string g_last_error;

kw_status to_status(kw::ErrorCode code) {
  using kw::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return KW_ERR_INVALID_ARGUMENT;
    case ErrorCode::grid_mismatch: return KW_ERR_GRID_MISMATCH;
    case ErrorCode::hypothesis: return KW_ERR_HYPOTHESIS;
    case ErrorCode::incompatible_rhs: return KW_ERR_INCOMPATIBLE_RHS;
    case ErrorCode::no_convergence: return KW_ERR_NO_CONVERGENCE;
    case ErrorCode::overflow: return KW_ERR_OVERFLOW;
    case ErrorCode::io: return KW_ERR_IO;
    case ErrorCode::barrier: return KW_ERR_BARRIER;
    case ErrorCode::monotonicity: return KW_ERR_MONOTONICITY;
    case ErrorCode::internal: return KW_ERR_INTERNAL;
  }
  return KW_ERR_INTERNAL;
}

template <class F>
kw_status guarded(F&& fn) {
  try {
    fn();
    return KW_OK;
  } catch (const kw::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KW_ERR_INTERNAL;
  }
}

kw_status bad_argument(const char* msg) {
  g_last_error = msg;
  return KW_ERR_INVALID_ARGUMENT;
}

const kw::DriftForm& drift_or_zero(const kw_drift* theta, const kw::GridPtr& grid,
                                   kw::DriftForm& storage) {
  if (theta != nullptr) return theta->drift;
  storage = kw::DriftForm::zero(grid);
  return storage;
}

kw::Scheme to_scheme(int scheme) {
  if (scheme == KW_SCHEME_EXPLICIT) return kw::Scheme::explicit_euler;
  if (scheme == KW_SCHEME_IMEX) return kw::Scheme::imex;
  kw::fail(kw::ErrorCode::invalid_argument, "unknown scheme id");
}

}  // namespace

extern "C" {

const char* kw_status_name(kw_status status) {
  switch (status) {
    case KW_OK: return "KW_OK";
    case KW_ERR_INVALID_ARGUMENT: return "KW_ERR_INVALID_ARGUMENT";
    case KW_ERR_GRID_MISMATCH: return "KW_ERR_GRID_MISMATCH";
    case KW_ERR_HYPOTHESIS: return "KW_ERR_HYPOTHESIS";
    case KW_ERR_INCOMPATIBLE_RHS: return "KW_ERR_INCOMPATIBLE_RHS";
    case KW_ERR_NO_CONVERGENCE: return "KW_ERR_NO_CONVERGENCE";
    case KW_ERR_OVERFLOW: return "KW_ERR_OVERFLOW";
    case KW_ERR_IO: return "KW_ERR_IO";
    case KW_ERR_BARRIER: return "KW_ERR_BARRIER";
    case KW_ERR_MONOTONICITY: return "KW_ERR_MONOTONICITY";
    case KW_ERR_INTERNAL: return "KW_ERR_INTERNAL";
  }
  return "KW_ERR_INTERNAL";
}

const char* kw_last_error_message(void) { return g_last_error.c_str(); }

/* -- grids -------------------------------------------------------------- */

kw_status kw_grid_create(int dim, const int* points, const double* periods,
                         kw_grid** out) {
  if (points == nullptr || periods == nullptr || out == nullptr)
    return bad_argument("kw_grid_create: null argument");
  return guarded([&] {
    kw::GridSpec spec;
    spec.dim = dim;
    for (int a = 0; a < dim && a < kw::kMaxDim; ++a) {
      spec.points[static_cast<size_t>(a)] = points[a];
      spec.periods[static_cast<size_t>(a)] = periods[a];
    }
    *out = new kw_grid{kw::build_grid(spec)};
  });
}

void kw_grid_release(kw_grid* grid) { delete grid; }

int kw_grid_dim(const kw_grid* grid) { return grid->grid->dim(); }
int kw_grid_points(const kw_grid* grid, int axis) {
  return grid->grid->points(axis);
}
double kw_grid_period(const kw_grid* grid, int axis) {
  return grid->grid->period(axis);
}
double kw_grid_spacing(const kw_grid* grid, int axis) {
  return grid->grid->spacing(axis);
}
double kw_grid_node_weight(const kw_grid* grid) {
  return grid->grid->node_weight();
}
int64_t kw_grid_node_count(const kw_grid* grid) {
  return static_cast<int64_t>(grid->grid->node_count());
}
int kw_grid_equal(const kw_grid* a, const kw_grid* b) {
  return a->grid->same_as(*b->grid) ? 1 : 0;
}

/* -- fields -------------------------------------------------------------- */

kw_status kw_field_zeros(const kw_grid* grid, kw_field** out) {
  if (grid == nullptr || out == nullptr)
    return bad_argument("kw_field_zeros: null argument");
  return guarded([&] { *out = new kw_field{kw::ScalarField::zeros(grid->grid)}; });
}

kw_status kw_field_fill(const kw_grid* grid, double value, kw_field** out) {
  if (grid == nullptr || out == nullptr)
    return bad_argument("kw_field_fill: null argument");
  return guarded(
      [&] { *out = new kw_field{kw::ScalarField::constant(grid->grid, value)}; });
}

kw_status kw_field_from_values(const kw_grid* grid, const double* values,
                               int64_t n, kw_field** out) {
  if (grid == nullptr || values == nullptr || out == nullptr)
    return bad_argument("kw_field_from_values: null argument");
  return guarded([&] {
    if (n != static_cast<int64_t>(grid->grid->node_count()))
      kw::fail(kw::ErrorCode::invalid_argument,
               "value count does not match the grid");
    std::vector<double> v(values, values + n);
    *out = new kw_field{kw::ScalarField::from_values(grid->grid, std::move(v))};
  });
}

void kw_field_release(kw_field* field) { delete field; }

int64_t kw_field_size(const kw_field* field) {
  return static_cast<int64_t>(field->field.size());
}

const double* kw_field_data(const kw_field* field) {
  return field->field.vector().data();
}

kw_status kw_field_grid(const kw_field* field, kw_grid** out) {
  if (field == nullptr || out == nullptr)
    return bad_argument("kw_field_grid: null argument");
  *out = new kw_grid{field->field.grid()};
  return KW_OK;
}

double kw_field_min(const kw_field* field) { return field->field.min(); }
double kw_field_max(const kw_field* field) { return field->field.max(); }

kw_status kw_field_max_abs_diff(const kw_field* a, const kw_field* b,
                                double* out) {
  if (a == nullptr || b == nullptr || out == nullptr)
    return bad_argument("kw_field_max_abs_diff: null argument");
  return guarded([&] { *out = kw::max_abs_diff(a->field, b->field); });
}

kw_status kw_field_write(const kw_field* field, const char* path) {
  if (field == nullptr || path == nullptr)
    return bad_argument("kw_field_write: null argument");
  return guarded([&] { kw::write_field(field->field, path); });
}

kw_status kw_field_read(const char* path, kw_field** out) {
  if (path == nullptr || out == nullptr)
    return bad_argument("kw_field_read: null argument");
  return guarded([&] { *out = new kw_field{kw::read_field(path)}; });
}

/* -- drifts -------------------------------------------------------------- */

kw_status kw_drift_zero(const kw_grid* grid, kw_drift** out) {
  if (grid == nullptr || out == nullptr)
    return bad_argument("kw_drift_zero: null argument");
  return guarded([&] { *out = new kw_drift{kw::DriftForm::zero(grid->grid)}; });
}

kw_status kw_drift_constant(const kw_grid* grid, const double* components,
                            kw_drift** out) {
  if (grid == nullptr || components == nullptr || out == nullptr)
    return bad_argument("kw_drift_constant: null argument");
  return guarded([&] {
    std::span<const double> span(components,
                                 static_cast<size_t>(grid->grid->dim()));
    *out = new kw_drift{kw::DriftForm::constant(grid->grid, span)};
  });
}

kw_status kw_drift_stream2d(const kw_field* psi, kw_drift** out) {
  if (psi == nullptr || out == nullptr)
    return bad_argument("kw_drift_stream2d: null argument");
  return guarded([&] { *out = new kw_drift{kw::DriftForm::stream2d(psi->field)}; });
}

kw_status kw_drift_from_components(const kw_field* const* components, int n,
                                   kw_drift** out) {
  if (components == nullptr || out == nullptr || n < 1)
    return bad_argument("kw_drift_from_components: null argument");
  return guarded([&] {
    std::vector<kw::ScalarField> comps;
    comps.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (components[i] == nullptr)
        kw::fail(kw::ErrorCode::invalid_argument, "null drift component");
      comps.push_back(components[i]->field);
    }
    *out = new kw_drift{kw::DriftForm::from_components(std::move(comps))};
  });
}

void kw_drift_release(kw_drift* drift) { delete drift; }

kw_status kw_drift_max_divergence(const kw_drift* drift, double* out) {
  if (drift == nullptr || out == nullptr)
    return bad_argument("kw_drift_max_divergence: null argument");
  return guarded([&] { *out = kw::max_abs_divergence(drift->drift); });
}

/* -- operators -------------------------------------------------------------- */

kw_status kw_laplacian(const kw_field* u, kw_field** out) {
  if (u == nullptr || out == nullptr)
    return bad_argument("kw_laplacian: null argument");
  return guarded([&] { *out = new kw_field{kw::laplacian(u->field)}; });
}

kw_status kw_drift_term(const kw_field* u, const kw_drift* theta, kw_field** out) {
  if (u == nullptr || theta == nullptr || out == nullptr)
    return bad_argument("kw_drift_term: null argument");
  return guarded(
      [&] { *out = new kw_field{kw::drift_term(u->field, theta->drift)}; });
}

kw_status kw_apply_L(const kw_field* u, const kw_drift* theta, kw_field** out) {
  if (u == nullptr || theta == nullptr || out == nullptr)
    return bad_argument("kw_apply_L: null argument");
  return guarded([&] { *out = new kw_field{kw::apply_L(u->field, theta->drift)}; });
}

kw_status kw_divergence(const kw_drift* theta, kw_field** out) {
  if (theta == nullptr || out == nullptr)
    return bad_argument("kw_divergence: null argument");
  return guarded([&] { *out = new kw_field{kw::divergence(theta->drift)}; });
}

kw_status kw_integrate(const kw_field* f, double* out) {
  if (f == nullptr || out == nullptr)
    return bad_argument("kw_integrate: null argument");
  return guarded([&] { *out = kw::integrate(f->field); });
}

kw_status kw_lp_norm(const kw_field* f, double p, double* out) {
  if (f == nullptr || out == nullptr)
    return bad_argument("kw_lp_norm: null argument");
  return guarded([&] { *out = kw::lp_norm(f->field, p); });
}

kw_status kw_solve_linear_L(const kw_field* f, const kw_drift* theta, double tol,
                            kw_field** out) {
  if (f == nullptr || theta == nullptr || out == nullptr)
    return bad_argument("kw_solve_linear_L: null argument");
  return guarded([&] {
    *out = new kw_field{kw::solve_linear_L(f->field, theta->drift, tol)};
  });
}

kw_status kw_explicit_stability_dt(const kw_grid* grid, double* out) {
  if (grid == nullptr || out == nullptr)
    return bad_argument("kw_explicit_stability_dt: null argument");
  *out = kw::explicit_stability_dt(*grid->grid);
  return KW_OK;
}

/* -- problems -------------------------------------------------------------- */

kw_status kw_problem_create(const kw_field* S, const kw_field* A,
                            const kw_field* B, double alpha, double beta,
                            const kw_drift* theta, kw_problem** out) {
  if (S == nullptr || A == nullptr || B == nullptr || out == nullptr)
    return bad_argument("kw_problem_create: null argument");
  return guarded([&] {
    kw::DriftForm storage;
    const kw::DriftForm& drift = drift_or_zero(theta, S->field.grid(), storage);
    *out = new kw_problem{kw::ProblemData::create(S->field, A->field, B->field,
                                                  alpha, beta, drift)};
  });
}

void kw_problem_release(kw_problem* problem) { delete problem; }

kw_status kw_problem_validate(const kw_problem* problem, int strict,
                              kw_hypothesis_report* out) {
  if (problem == nullptr || out == nullptr)
    return bad_argument("kw_problem_validate: null argument");
  return guarded([&] {
    const kw::HypothesisReport r = kw::validate(
        problem->problem,
        strict != 0 ? kw::HypothesisMode::strict : kw::HypothesisMode::weak);
    out->strict = strict != 0;
    out->passed = r.passed;
    out->a_nonnegative = r.a_nonnegative;
    out->a_not_identically_zero = r.a_not_identically_zero;
    out->b_nonnegative = r.b_nonnegative;
    out->s_mean_negative = r.s_mean_negative;
    out->theta_coclosed = r.theta_coclosed;
    out->a_strictly_positive = r.a_strictly_positive;
    out->s_mean = r.s_mean;
    out->a_min = r.a_min;
    out->a_max = r.a_max;
    out->b_min = r.b_min;
    out->theta_max_divergence = r.theta_max_divergence;
  });
}

kw_status kw_residual(const kw_problem* problem, const kw_field* u,
                      kw_field** out) {
  if (problem == nullptr || u == nullptr || out == nullptr)
    return bad_argument("kw_residual: null argument");
  return guarded(
      [&] { *out = new kw_field{kw::residual(problem->problem, u->field)}; });
}

kw_status kw_manufacture(const kw_field* u_star, const kw_field* A,
                         const kw_field* B, double alpha, double beta,
                         const kw_drift* theta, kw_problem** out) {
  if (u_star == nullptr || A == nullptr || B == nullptr || out == nullptr)
    return bad_argument("kw_manufacture: null argument");
  return guarded([&] {
    kw::DriftForm storage;
    const kw::DriftForm& drift =
        drift_or_zero(theta, u_star->field.grid(), storage);
    *out = new kw_problem{kw::manufacture(u_star->field, A->field, B->field,
                                          alpha, beta, drift)};
  });
}

/* -- flow -------------------------------------------------------------- */

kw_status kw_flow_step(const kw_field* u, const kw_problem* problem, double dt,
                       int scheme, kw_field** out) {
  if (u == nullptr || problem == nullptr || out == nullptr)
    return bad_argument("kw_flow_step: null argument");
  return guarded([&] {
    *out = new kw_field{
        kw::flow_step(u->field, problem->problem, dt, to_scheme(scheme))};
  });
}

kw_status kw_run_flow(const kw_problem* problem, const kw_field* u0,
                      const kw_flow_config* config, kw_flow_result** out) {
  if (problem == nullptr || u0 == nullptr || config == nullptr || out == nullptr)
    return bad_argument("kw_run_flow: null argument");
  return guarded([&] {
    kw::FlowConfig c;
    c.scheme = to_scheme(config->scheme);
    c.dt = config->dt;
    c.residual_tol = config->residual_tol;
    c.max_time = config->max_time;
    c.trace_stride = config->trace_stride;
    c.record_snapshots = config->record_snapshots != 0;
    *out = new kw_flow_result{kw::run_flow(u0->field, problem->problem, c)};
  });
}

void kw_flow_result_release(kw_flow_result* result) { delete result; }

int kw_flow_result_converged(const kw_flow_result* result) {
  return result->result.converged ? 1 : 0;
}
int kw_flow_result_steps(const kw_flow_result* result) {
  return result->result.steps;
}
double kw_flow_result_dt(const kw_flow_result* result) {
  return result->result.dt;
}
double kw_flow_result_final_time(const kw_flow_result* result) {
  return result->result.final_time;
}
double kw_flow_result_final_residual(const kw_flow_result* result) {
  return result->result.final_residual;
}

kw_status kw_flow_result_solution(const kw_flow_result* result, kw_field** out) {
  if (result == nullptr || out == nullptr)
    return bad_argument("kw_flow_result_solution: null argument");
  *out = new kw_field{result->result.u};
  return KW_OK;
}

int64_t kw_flow_result_trace_length(const kw_flow_result* result) {
  return static_cast<int64_t>(result->result.trace.times.size());
}

int kw_flow_result_has_energy(const kw_flow_result* result) {
  return result->result.trace.has_energy() ? 1 : 0;
}

kw_status kw_flow_result_trace_column(const kw_flow_result* result, int column,
                                      double* out) {
  if (result == nullptr || out == nullptr)
    return bad_argument("kw_flow_result_trace_column: null argument");
  return guarded([&] {
    const kw::FlowTrace& t = result->result.trace;
    const std::vector<double>* src = nullptr;
    switch (column) {
      case KW_TRACE_TIME: src = &t.times; break;
      case KW_TRACE_SUP_UT: src = &t.sup_ut; break;
      case KW_TRACE_MIN_U: src = &t.min_u; break;
      case KW_TRACE_MAX_U: src = &t.max_u; break;
      case KW_TRACE_ENERGY:
        if (!t.has_energy())
          kw::fail(kw::ErrorCode::invalid_argument,
                   "trace has no energy column (theta != 0)");
        src = &t.energy;
        break;
      default:
        kw::fail(kw::ErrorCode::invalid_argument, "unknown trace column");
    }
    std::memcpy(out, src->data(), src->size() * sizeof(double));
  });
}

kw_status kw_flow_result_sup_ut_monotone(const kw_flow_result* result, int* out) {
  if (result == nullptr || out == nullptr)
    return bad_argument("kw_flow_result_sup_ut_monotone: null argument");
  *out = result->result.trace.sup_ut_monotone() ? 1 : 0;
  return KW_OK;
}

kw_status kw_flow_result_energy_monotone(const kw_flow_result* result, int* out) {
  if (result == nullptr || out == nullptr)
    return bad_argument("kw_flow_result_energy_monotone: null argument");
  *out = result->result.trace.energy_monotone() ? 1 : 0;
  return KW_OK;
}

kw_status kw_flow_result_write_trace_csv(const kw_flow_result* result,
                                         const char* path) {
  if (result == nullptr || path == nullptr)
    return bad_argument("kw_flow_result_write_trace_csv: null argument");
  return guarded([&] { result->result.trace.write_csv_file(path); });
}

kw_status kw_energy(const kw_problem* problem, const kw_field* u, double* out) {
  if (problem == nullptr || u == nullptr || out == nullptr)
    return bad_argument("kw_energy: null argument");
  return guarded([&] { *out = kw::energy(problem->problem, u->field); });
}

kw_status kw_flow_verify_barrier(const kw_flow_result* result,
                                 const kw_problem* problem, const kw_field* u0,
                                 double slack, kw_barrier_report* out) {
  if (result == nullptr || problem == nullptr || u0 == nullptr || out == nullptr)
    return bad_argument("kw_flow_verify_barrier: null argument");
  return guarded([&] {
    const double s = slack > 0.0 ? slack : kw::defaults::barrier_slack;
    const kw::BarrierReport r = kw::verify_flow_barrier(
        result->result.snapshots, problem->problem, u0->field, s);
    out->pass = r.pass;
    out->worst_margin = r.worst_margin;
    out->c0 = r.c0;
    out->phi_limit = r.phi_limit;
    out->s_bar = r.s_bar;
    out->sup_w = r.sup_w;
    out->samples = r.samples;
  });
}

kw_status kw_barrier_phi(double t, double alpha, double s_bar, double sup_a,
                         double sup_w, double c0, double* out) {
  if (out == nullptr) return bad_argument("kw_barrier_phi: null argument");
  return guarded([&] {
    kw::BarrierData data;
    data.s_bar = s_bar;
    data.c0 = c0;
    data.sup_w = sup_w;
    *out = kw::barrier_phi(t, data, sup_a, alpha);
  });
}

kw_status kw_comparison_ode_solve(double (*F)(double phi, double t, void* ctx),
                                  void* ctx, double c0, double T, double dt,
                                  double* t_out, double* phi_out,
                                  int64_t capacity, int64_t* count) {
  if (F == nullptr || t_out == nullptr || phi_out == nullptr || count == nullptr)
    return bad_argument("kw_comparison_ode_solve: null argument");
  return guarded([&] {
    const kw::OdeSamples samples = kw::comparison_ode_solve(
        [&](double phi, double t) { return F(phi, t, ctx); }, c0, T, dt);
    if (static_cast<int64_t>(samples.t.size()) > capacity)
      kw::fail(kw::ErrorCode::invalid_argument,
               "output capacity too small for the ODE samples");
    std::memcpy(t_out, samples.t.data(), samples.t.size() * sizeof(double));
    std::memcpy(phi_out, samples.phi.data(), samples.phi.size() * sizeof(double));
    *count = static_cast<int64_t>(samples.t.size());
  });
}

kw_status kw_fit_decay_rate(const kw_flow_result* result, double t_a, double t_b,
                            double* rate) {
  if (result == nullptr || rate == nullptr)
    return bad_argument("kw_fit_decay_rate: null argument");
  return guarded(
      [&] { *rate = kw::fit_decay_rate(result->result.trace, t_a, t_b); });
}

/* -- stationary solvers ----------------------------------------------------- */

kw_status kw_newton_solve(const kw_problem* problem, const kw_field* u0,
                          double tol, int max_iter, kw_field** u_out,
                          int* iterations, int* converged,
                          double* final_residual) {
  if (problem == nullptr || u_out == nullptr)
    return bad_argument("kw_newton_solve: null argument");
  return guarded([&] {
    const kw::ScalarField start =
        u0 != nullptr ? u0->field
                      : kw::ScalarField::zeros(problem->problem.grid());
    kw::NewtonResult r = kw::newton_solve(problem->problem, start, tol, max_iter);
    if (iterations != nullptr) *iterations = r.iterations;
    if (converged != nullptr) *converged = r.converged ? 1 : 0;
    if (final_residual != nullptr) *final_residual = r.final_residual;
    *u_out = new kw_field{std::move(r.u)};
  });
}

kw_status kw_upper_lower_build(const kw_problem* problem, const double* a,
                               const double* b, const double* m,
                               kw_upper_lower** out) {
  if (problem == nullptr || out == nullptr)
    return bad_argument("kw_upper_lower_build: null argument");
  return guarded([&] {
    kw::UpperLowerOptions options;
    if (a != nullptr) options.a = *a;
    if (b != nullptr) options.b = *b;
    if (m != nullptr) options.m = *m;
    *out = new kw_upper_lower{kw::build_upper_lower(problem->problem, options)};
  });
}

void kw_upper_lower_release(kw_upper_lower* ul) { delete ul; }

kw_status kw_upper_lower_info_get(const kw_upper_lower* ul,
                                  kw_upper_lower_info* out) {
  if (ul == nullptr || out == nullptr)
    return bad_argument("kw_upper_lower_info_get: null argument");
  const kw::UpperLowerData& d = ul->data;
  out->a = d.a;
  out->b = d.b;
  out->m = d.m;
  out->s_bar = d.s_bar;
  out->a_bar = d.a_bar;
  out->c1 = d.c1;
  out->c2 = d.c2;
  out->sup_residual_plus = d.sup_residual_plus;
  out->min_residual_minus = d.min_residual_minus;
  return KW_OK;
}

kw_status kw_upper_lower_field(const kw_upper_lower* ul, int which,
                               kw_field** out) {
  if (ul == nullptr || out == nullptr)
    return bad_argument("kw_upper_lower_field: null argument");
  return guarded([&] {
    const kw::ScalarField* f = nullptr;
    switch (which) {
      case KW_UL_U_PLUS: f = &ul->data.u_plus; break;
      case KW_UL_U_MINUS: f = &ul->data.u_minus; break;
      case KW_UL_V1: f = &ul->data.v1; break;
      case KW_UL_V2: f = &ul->data.v2; break;
      default:
        kw::fail(kw::ErrorCode::invalid_argument, "unknown upper/lower field id");
    }
    *out = new kw_field{*f};
  });
}

kw_status kw_monotone_solve(const kw_problem* problem, const kw_upper_lower* ul,
                            double tol, int max_iter, kw_field** u_out,
                            int* iterations, int* converged, int* monotone,
                            double* final_residual) {
  if (problem == nullptr || ul == nullptr || u_out == nullptr)
    return bad_argument("kw_monotone_solve: null argument");
  return guarded([&] {
    kw::MonotoneResult r =
        kw::monotone_solve(problem->problem, ul->data, tol, max_iter);
    if (iterations != nullptr) *iterations = r.iterations;
    if (converged != nullptr) *converged = r.converged ? 1 : 0;
    if (monotone != nullptr) *monotone = r.iterates_monotone ? 1 : 0;
    if (final_residual != nullptr) *final_residual = r.final_residual;
    *u_out = new kw_field{std::move(r.u)};
  });
}

kw_status kw_cross_validate(const kw_field* const* solutions, int n, double tol,
                            double* max_diff, int* pass) {
  if (solutions == nullptr || max_diff == nullptr)
    return bad_argument("kw_cross_validate: null argument");
  return guarded([&] {
    std::vector<kw::ScalarField> fields;
    fields.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (solutions[i] == nullptr)
        kw::fail(kw::ErrorCode::invalid_argument, "null solution handle");
      fields.push_back(solutions[i]->field);
    }
    const kw::CrossValidation cv = kw::cross_validate(fields, tol);
    *max_diff = cv.max_diff;
    if (pass != nullptr) *pass = cv.pass ? 1 : 0;
  });
}

/* -- bounds -------------------------------------------------------------- */

kw_status kw_lower_bound(const kw_problem* problem, double* C, double* t0,
                         kw_field** w_out) {
  if (problem == nullptr || C == nullptr || t0 == nullptr)
    return bad_argument("kw_lower_bound: null argument");
  return guarded([&] {
    kw::LowerBound lb = kw::lower_bound(problem->problem);
    *C = lb.C;
    *t0 = lb.t0;
    if (w_out != nullptr) *w_out = new kw_field{std::move(lb.w)};
  });
}

kw_status kw_l2_upper_bound(const kw_problem* problem, double C, double* out) {
  if (problem == nullptr || out == nullptr)
    return bad_argument("kw_l2_upper_bound: null argument");
  return guarded([&] { *out = kw::l2_upper_bound(problem->problem, C); });
}

kw_status kw_verify_solution_bounds(const kw_problem* problem, const kw_field* u,
                                    double slack, kw_bounds_report* out) {
  if (problem == nullptr || u == nullptr || out == nullptr)
    return bad_argument("kw_verify_solution_bounds: null argument");
  return guarded([&] {
    const double s = slack > 0.0 ? slack : kw::defaults::bound_slack;
    const kw::BoundsReport r =
        kw::verify_solution_bounds(problem->problem, u->field, s);
    out->lower_bound_c = r.lower_bound_C;
    out->t0 = r.t0;
    out->w_sup_norm = r.w_sup_norm;
    out->eta = r.eta;
    out->c_tilde = r.c_tilde;
    out->l2_bound = r.l2_bound;
    out->min_u = r.min_u;
    out->l2_norm_u = r.l2_norm_u;
    out->lower_pass = r.lower_pass;
    out->lower_margin = r.lower_margin;
    out->l2_evaluated = r.l2_evaluated;
    out->l2_pass = r.l2_pass;
    out->l2_margin = r.l2_margin;
    out->passed = r.passed;
  });
}

kw_status kw_norm_ladder(const kw_field* u, double p0, int levels, double* out) {
  if (u == nullptr || out == nullptr)
    return bad_argument("kw_norm_ladder: null argument");
  return guarded([&] {
    const std::vector<double> ladder = kw::norm_ladder(u->field, p0, levels);
    std::memcpy(out, ladder.data(), ladder.size() * sizeof(double));
  });
}

}  // extern "C"
