#include "estimates.hpp"

#include <cmath>
#include <limits>

#include "linsolve.hpp"

namespace kw {

LowerBound lower_bound(const ProblemData& problem, double solve_tol) {
  const double s_bar = integrate(problem.S);
  if (!(s_bar < 0.0))
    fail(ErrorCode::hypothesis, "lower bound requires mean(S) < 0");
  const double sup_A = problem.A.max();
  if (!(sup_A > 0.0))
    fail(ErrorCode::hypothesis, "lower bound requires max A > 0");

  LowerBound lb;
  lb.w = solve_linear_L(add_constant(problem.S, -s_bar), problem.theta, solve_tol);
  const double w_c0 = lb.w.max_abs();
  // t0 = -(1/alpha) ln( -(sup A)^{-1} e^{-alpha ||w||_C0} mean(S) ).
  lb.t0 = -std::log(-s_bar * std::exp(-problem.alpha * w_c0) / sup_A) /
          problem.alpha;
  lb.C = lb.t0 - lb.w.min();
  return lb;
}

double l2_upper_bound(const ProblemData& problem, double C) {
  const double eta = problem.A.min();
  if (!(eta > 0.0))
    fail(ErrorCode::hypothesis, "the L2 bound requires min A > 0");
  const double max_B = problem.B.max();
  if (problem.beta * C > defaults::overflow_arg)
    fail(ErrorCode::overflow, "lower-bound constant too large for e^{beta C}");
  const double c_tilde = std::exp(problem.beta * C) * std::max(max_B, 0.0);
  const double alpha6 = std::pow(problem.alpha, 6);
  const double k = 144.0 / alpha6 / (eta * eta);
  const double s_l2 = lp_norm(problem.S, 2.0);
  return std::sqrt(C * C + k * s_l2 * s_l2 + (c_tilde * k + 3.0));
}

BoundsReport verify_solution_bounds(const ProblemData& problem,
                                    const ScalarField& u, double slack) {
  require_same_grid(u, problem.S);
  const LowerBound lb = lower_bound(problem);

  BoundsReport report;
  report.lower_bound_C = lb.C;
  report.t0 = lb.t0;
  report.w_sup_norm = lb.w.max_abs();
  report.eta = problem.A.min();
  report.min_u = u.min();
  report.l2_norm_u = lp_norm(u, 2.0);

  const double floor = lb.w.min() - lb.t0;  // = -C
  report.lower_margin = report.min_u - floor;
  report.lower_pass = report.min_u >= floor - slack;

  if (report.eta > defaults::zero_tol) {
    report.l2_evaluated = 1;
    report.c_tilde = std::exp(problem.beta * lb.C) * std::max(problem.B.max(), 0.0);
    report.l2_bound = l2_upper_bound(problem, lb.C);
    report.l2_margin = report.l2_bound - report.l2_norm_u;
    report.l2_pass = report.l2_norm_u <= report.l2_bound;
  } else {
    report.l2_bound = std::numeric_limits<double>::quiet_NaN();
    report.l2_margin = std::numeric_limits<double>::quiet_NaN();
  }
  report.passed = report.lower_pass && (report.l2_evaluated == 0 || report.l2_pass);
  return report;
}

std::vector<double> norm_ladder(const ScalarField& u, double p0, int levels) {
  if (!(p0 >= 1.0))
    fail(ErrorCode::invalid_argument, "ladder base exponent must be >= 1");
  if (levels < 1)
    fail(ErrorCode::invalid_argument, "ladder needs at least one level");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(levels) + 1);
  double p = p0;
  for (int k = 0; k <= levels; ++k) {
    out.push_back(lp_norm(u, p));
    p *= 2.0;
  }
  return out;
}

}  // namespace kw
