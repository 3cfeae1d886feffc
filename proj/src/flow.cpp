#include "flow.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "linsolve.hpp"
#include "spectral.hpp"

namespace kw {

namespace {

bool theta_is_constant(const DriftForm& theta) {
  return theta.kind() != DriftForm::Kind::general;
}

const double* constant_theta(const DriftForm& theta,
                             std::array<double, kMaxDim>& storage) {
  if (theta.is_zero()) return nullptr;
  for (int a = 0; a < theta.grid()->dim(); ++a)
    storage[static_cast<size_t>(a)] = theta.constant_component(a);
  return storage.data();
}

/// -S - A e^{alpha u} + B e^{-beta u}, the non-drift explicit part.
void reaction_rhs(const ProblemData& p, const ScalarField& u,
                  std::vector<double>& out) {
  out.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = -p.S[i] - p.A[i] * std::exp(p.alpha * u[i]) +
             p.B[i] * std::exp(-p.beta * u[i]);
}

}  // namespace

bool FlowTrace::sup_ut_monotone(double slack) const {
  for (std::size_t i = 1; i < sup_ut.size(); ++i)
    if (sup_ut[i] > sup_ut[i - 1] + slack * (1.0 + std::abs(sup_ut[i - 1])))
      return false;
  return true;
}

bool FlowTrace::energy_monotone(double slack) const {
  for (std::size_t i = 1; i < energy.size(); ++i)
    if (energy[i] > energy[i - 1] + slack * (1.0 + std::abs(energy[i - 1])))
      return false;
  return true;
}

void FlowTrace::write_csv(std::ostream& out) const {
  out << "t,sup_ut,energy,min_u,max_u\n";
  char buf[512];
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (has_energy())
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    times[i], sup_ut[i], energy[i], min_u[i], max_u[i]);
    else
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,,%.17g,%.17g\n", times[i],
                    sup_ut[i], min_u[i], max_u[i]);
    out << buf;
  }
}

void FlowTrace::write_csv_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open trace file for writing: " + path);
  write_csv(out);
  if (!out.good()) fail(ErrorCode::io, "failed writing trace file: " + path);
}

double explicit_stability_dt(const Grid& grid) {
  double s = 0.0;
  for (int a = 0; a < grid.dim(); ++a)
    s += 2.0 / (grid.spacing(a) * grid.spacing(a));
  return 0.9 / s;
}

double auto_dt(const ProblemData& problem, const ScalarField& u0, Scheme scheme) {
  if (scheme == Scheme::explicit_euler)
    return explicit_stability_dt(*problem.grid());
  const double rho0 = reaction_slope(problem, u0).max();
  double dt = 0.2 / (1.0 + rho0);
  if (!theta_is_constant(problem.theta)) {
    // General drifts are stepped explicitly; cap by an advective bound.
    const Grid& g = *problem.grid();
    for (int a = 0; a < g.dim(); ++a) {
      const double ta = problem.theta.component(a).max_abs();
      if (ta > 0.0) dt = std::min(dt, 0.25 * g.spacing(a) / ta);
    }
  }
  return dt;
}

ScalarField flow_step(const ScalarField& u, const ProblemData& problem,
                      double dt, Scheme scheme, SpectralWorkspace* workspace) {
  require_same_grid(u, problem.S);
  if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "dt must be positive");
  check_exp_range(problem, u);

  if (scheme == Scheme::explicit_euler) {
    const double bound = explicit_stability_dt(*u.grid());
    if (dt > bound) {
      std::ostringstream os;
      os << "explicit dt " << dt << " exceeds the stability bound " << bound;
      fail(ErrorCode::invalid_argument, os.str());
    }
    ScalarField r = residual(problem, u);
    ScalarField next = add_scaled(u, dt, r);
    if (!next.all_finite())
      fail(ErrorCode::overflow, "flow step produced non-finite values");
    return next;
  }

  // IMEX: reaction explicit; L implicit for constant drift, Laplacian
  // implicit and drift explicit otherwise.
  std::vector<double> rhs;
  reaction_rhs(problem, u, rhs);
  const bool const_theta = theta_is_constant(problem.theta);
  if (!const_theta) {
    const ScalarField drift = drift_term(u, problem.theta);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= drift[i];
  }
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = u[i] + dt * rhs[i];
  ScalarField rhs_field = ScalarField::from_values_unchecked(u.grid(), std::move(rhs));

  std::unique_ptr<SpectralWorkspace> local;
  if (workspace == nullptr) {
    local = std::make_unique<SpectralWorkspace>(u.grid());
    workspace = local.get();
  }
  std::array<double, kMaxDim> tc{};
  const double* theta_c = const_theta ? constant_theta(problem.theta, tc) : nullptr;
  ScalarField next = workspace->solve(rhs_field, 1.0, -dt, theta_c);
  if (!next.all_finite())
    fail(ErrorCode::overflow, "flow step produced non-finite values");
  return next;
}

FlowResult run_flow(const ScalarField& u0, const ProblemData& problem,
                    const FlowConfig& config) {
  require_same_grid(u0, problem.S);
  require_hypotheses(problem, HypothesisMode::weak);
  if (!(config.residual_tol > 0.0))
    fail(ErrorCode::invalid_argument, "residual_tol must be positive");
  if (!(config.max_time > 0.0))
    fail(ErrorCode::invalid_argument, "max_time must be positive");
  if (config.trace_stride < 1)
    fail(ErrorCode::invalid_argument, "trace_stride must be >= 1");

  FlowResult result;
  result.dt = config.dt > 0.0 ? config.dt : auto_dt(problem, u0, config.scheme);
  if (config.scheme == Scheme::explicit_euler &&
      result.dt > explicit_stability_dt(*u0.grid())) {
    std::ostringstream os;
    os << "explicit dt " << result.dt << " exceeds the stability bound "
       << explicit_stability_dt(*u0.grid());
    fail(ErrorCode::invalid_argument, os.str());
  }

  const bool track_energy = drift_is_negligible(problem.theta);
  SpectralWorkspace workspace(u0.grid());

  ScalarField u = u0;
  auto sample = [&](double t, double res_sup) {
    result.trace.times.push_back(t);
    result.trace.sup_ut.push_back(res_sup);
    result.trace.min_u.push_back(u.min());
    result.trace.max_u.push_back(u.max());
    if (track_energy) result.trace.energy.push_back(energy(problem, u));
    if (config.record_snapshots) result.snapshots.emplace_back(t, u);
  };

  const long max_steps = static_cast<long>(std::ceil(config.max_time / result.dt));
  long k = 0;
  bool sampled = false;
  double res_sup = 0.0;
  for (;; ++k) {
    const double t = static_cast<double>(k) * result.dt;
    res_sup = residual(problem, u).max_abs();
    sampled = false;
    if (k % config.trace_stride == 0) {
      sample(t, res_sup);
      sampled = true;
    }
    if (res_sup <= config.residual_tol) {
      result.converged = true;
      result.final_time = t;
      break;
    }
    if (k >= max_steps) {
      result.final_time = t;
      break;
    }
    u = flow_step(u, problem, result.dt, config.scheme, &workspace);
  }
  if (!sampled) sample(result.final_time, res_sup);
  result.u = std::move(u);
  result.final_residual = res_sup;
  result.steps = static_cast<int>(k);
  return result;
}

double energy(const ProblemData& problem, const ScalarField& u) {
  require_same_grid(u, problem.S);
  if (!drift_is_negligible(problem.theta))
    fail(ErrorCode::invalid_argument,
         "the energy functional is only defined for theta = 0");
  check_exp_range(problem, u);

  const Grid& g = *u.grid();
  long double acc = 0.0L;
  // 1/2 |grad u|^2 by central differences.
  for (int a = 0; a < g.dim(); ++a) {
    const double inv2h = 1.0 / (2.0 * g.spacing(a));
    axis_pass(g, a, [&](std::size_t, std::size_t np, std::size_t nm) {
      const double d = (u[np] - u[nm]) * inv2h;
      acc += 0.5L * static_cast<long double>(d) * static_cast<long double>(d);
    });
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += static_cast<long double>(problem.S[i]) * static_cast<long double>(u[i]);
    acc += static_cast<long double>(problem.A[i] / problem.alpha) *
           expl(static_cast<long double>(problem.alpha * u[i]));
    acc += static_cast<long double>(problem.B[i] / problem.beta) *
           expl(static_cast<long double>(-problem.beta * u[i]));
  }
  return static_cast<double>(acc * static_cast<long double>(g.node_weight()));
}

BarrierData BarrierData::build(const ProblemData& problem, const ScalarField& u0,
                               double c0_margin, double solve_tol) {
  require_same_grid(u0, problem.S);
  BarrierData data;
  data.s_bar = integrate(problem.S);
  if (!(data.s_bar < 0.0))
    fail(ErrorCode::hypothesis, "barrier construction requires mean(S) < 0");
  const double sup_A = problem.A.max();
  if (!(sup_A > 0.0))
    fail(ErrorCode::hypothesis, "barrier construction requires max A > 0");

  data.w = solve_linear_L(add_constant(problem.S, -data.s_bar), problem.theta,
                          solve_tol);
  data.sup_w = data.w.max();
  data.min_w = data.w.min();

  const double sup_v0 = max_abs_diff(u0, data.w);  // sup |-u0 + w|
  const double phi_limit =
      std::log(-sup_A * std::exp(problem.alpha * data.sup_w) / data.s_bar) /
      problem.alpha;
  data.c0 = std::max(sup_v0, phi_limit) + c0_margin;
  return data;
}

double barrier_phi(double t, const BarrierData& data, double sup_A, double alpha) {
  if (!(data.s_bar < 0.0))
    fail(ErrorCode::barrier, "barrier data requires mean(S) < 0");
  if (alpha * data.c0 > defaults::overflow_arg)
    fail(ErrorCode::overflow, "barrier c0 too large for the exponential");
  const double q = sup_A * std::exp(alpha * data.sup_w);
  // phi(t) = (1/alpha) ln( ((q + s_bar e^{alpha c0})/s_bar) e^{alpha s_bar t}
  //                        - q/s_bar ).
  const double coef = std::exp(alpha * data.c0) + q / data.s_bar;
  const double arg = coef * std::exp(alpha * data.s_bar * t) - q / data.s_bar;
  if (!(arg > 0.0))
    fail(ErrorCode::barrier,
         "barrier log argument is nonpositive; c0 violates its lower bound");
  return std::log(arg) / alpha;
}

OdeSamples comparison_ode_solve(const std::function<double(double, double)>& F,
                                double c0, double T, double dt) {
  if (!(dt > 0.0) || !(T >= 0.0))
    fail(ErrorCode::invalid_argument, "need dt > 0 and T >= 0");
  OdeSamples out;
  const long n = static_cast<long>(std::ceil(T / dt - 1e-12));
  out.t.reserve(static_cast<size_t>(n) + 1);
  out.phi.reserve(static_cast<size_t>(n) + 1);
  double phi = c0;
  out.t.push_back(0.0);
  out.phi.push_back(phi);
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double h = std::min(dt, T - t);
    const double k1 = F(phi, t);
    const double k2 = F(phi + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = F(phi + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = F(phi + h * k3, t + h);
    phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(phi) || std::abs(phi) > 1e8)
      fail(ErrorCode::overflow, "comparison ODE solution blew up");
    out.t.push_back(t + h);
    out.phi.push_back(phi);
  }
  return out;
}

BarrierReport verify_flow_barrier(
    const std::vector<std::pair<double, ScalarField>>& snapshots,
    const ProblemData& problem, const ScalarField& u0, double slack) {
  if (snapshots.empty())
    fail(ErrorCode::invalid_argument, "no snapshots to verify");
  const BarrierData data = BarrierData::build(problem, u0);
  const double sup_A = problem.A.max();

  BarrierReport report;
  report.c0 = data.c0;
  report.s_bar = data.s_bar;
  report.sup_w = data.sup_w;
  report.phi_limit =
      std::log(-sup_A * std::exp(problem.alpha * data.sup_w) / data.s_bar) /
      problem.alpha;
  report.samples = static_cast<int>(snapshots.size());

  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [t, u] : snapshots) {
    const double phi = barrier_phi(t, data, sup_A, problem.alpha);
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i)
      vmax = std::max(vmax, -u[i] + data.w[i]);
    worst = std::min(worst, phi + slack - vmax);
  }
  report.worst_margin = worst;
  report.pass = worst >= 0.0;
  return report;
}

double fit_decay_rate(const FlowTrace& trace, double t_a, double t_b) {
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t_a || t > t_b) continue;
    const double v = trace.sup_ut[i];
    if (!(v > 0.0))
      fail(ErrorCode::invalid_argument,
           "decay fit requires positive sup_ut samples in the window");
    ts.push_back(t);
    ys.push_back(2.0 * std::log(v));  // log(sup_ut^2)
  }
  if (ts.size() < 5)
    fail(ErrorCode::invalid_argument,
         "decay fit requires at least 5 samples in the window");
  long double st = 0.0L, sy = 0.0L, stt = 0.0L, sty = 0.0L;
  const auto n = static_cast<long double>(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += static_cast<long double>(ts[i]) * ts[i];
    sty += static_cast<long double>(ts[i]) * ys[i];
  }
  const long double denom = n * stt - st * st;
  if (denom == 0.0L)
    fail(ErrorCode::invalid_argument, "degenerate time window for the decay fit");
  return static_cast<double>((n * sty - st * sy) / denom);
}

}  // namespace kw
