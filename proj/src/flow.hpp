#pragma once

/// The parabolic flow du/dt = Lu - S - A e^{alpha u} + B e^{-beta u}:
/// explicit and IMEX steppers, convergence tracing, the dissipated energy
/// functional (theta = 0), scalar comparison-ODE barriers and the decay-rate
/// fit used by the convergence diagnostics.

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "problem.hpp"

namespace kw {

class SpectralWorkspace;

enum class Scheme { explicit_euler, imex };

struct FlowConfig {
  Scheme scheme = Scheme::imex;
  double dt = 0.0;  // <= 0 selects the automatic step size
  double residual_tol = 1e-8;
  double max_time = 100.0;
  int trace_stride = 10;
  bool record_snapshots = false;
};

struct FlowTrace {
  std::vector<double> times;
  std::vector<double> sup_ut;  // sup |du/dt| = sup-norm of the residual
  std::vector<double> min_u;
  std::vector<double> max_u;
  std::vector<double> energy;  // filled only when theta = 0

  bool has_energy() const { return !energy.empty(); }
  /// Nonincreasing within slack*(1+|value|) between consecutive samples.
  bool sup_ut_monotone(double slack = defaults::monotone_slack) const;
  bool energy_monotone(double slack = defaults::monotone_slack) const;
  void write_csv(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;
};

struct FlowResult {
  ScalarField u;
  FlowTrace trace;
  bool converged = false;
  double final_time = 0.0;
  double final_residual = 0.0;
  int steps = 0;
  double dt = 0.0;
  std::vector<std::pair<double, ScalarField>> snapshots;
};

/// CFL bound for the explicit scheme: 0.9 / sum_i(2/h_i^2).
double explicit_stability_dt(const Grid& grid);

/// Step size used when FlowConfig.dt <= 0.
double auto_dt(const ProblemData& problem, const ScalarField& u0, Scheme scheme);

/// One step of the flow. The IMEX scheme treats the whole linear part L
/// implicitly when theta is constant (Fourier-diagonal either way) and only
/// the Laplacian implicitly for general drifts. A workspace may be supplied
/// to reuse FFT plans across steps.
ScalarField flow_step(const ScalarField& u, const ProblemData& problem,
                      double dt, Scheme scheme,
                      SpectralWorkspace* workspace = nullptr);

FlowResult run_flow(const ScalarField& u0, const ProblemData& problem,
                    const FlowConfig& config);

/// Integral of 1/2 |grad u|^2 + S u + (A/alpha) e^{alpha u} + (B/beta) e^{-beta u}.
/// Only defined for theta = 0, where the flow dissipates it.
double energy(const ProblemData& problem, const ScalarField& u);

/// Data for the spatially constant barrier dominating v = -u + w, where w
/// solves L w = S - mean(S).
struct BarrierData {
  ScalarField w;
  double s_bar = 0.0;
  double c0 = 0.0;
  double sup_w = 0.0;
  double min_w = 0.0;

  static BarrierData build(const ProblemData& problem, const ScalarField& u0,
                           double c0_margin = defaults::c0_margin,
                           double solve_tol = 1e-12);
};

/// Closed-form solution of d(phi)/dt = s_bar + sup_A e^{alpha sup_w} e^{-alpha phi},
/// phi(0) = c0. Requires the log argument to stay positive (guaranteed by the
/// BarrierData invariants for t >= 0).
double barrier_phi(double t, const BarrierData& data, double sup_A, double alpha);

struct OdeSamples {
  std::vector<double> t;
  std::vector<double> phi;
};

/// Classical RK4 with fixed step for d(phi)/dt = F(phi, t), phi(0) = c0.
OdeSamples comparison_ode_solve(const std::function<double(double, double)>& F,
                                double c0, double T, double dt);

struct BarrierReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over samples of phi(t) + slack - max(-u+w)
  double c0 = 0.0;
  double phi_limit = 0.0;
  double s_bar = 0.0;
  double sup_w = 0.0;
  int samples = 0;
};

/// Checks max(-u(t) + w) <= phi(t) + slack at every recorded snapshot.
BarrierReport verify_flow_barrier(
    const std::vector<std::pair<double, ScalarField>>& snapshots,
    const ProblemData& problem, const ScalarField& u0,
    double slack = defaults::barrier_slack);

/// Least-squares slope of log(sup_ut^2) against t over samples with
/// t in [t_a, t_b]. Requires at least 5 samples, all positive.
double fit_decay_rate(const FlowTrace& trace, double t_a, double t_b);

}  // namespace kw
