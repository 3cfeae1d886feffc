#include "problem.hpp"

#include <cmath>
#include <sstream>

namespace kw {

ProblemData ProblemData::create(ScalarField S, ScalarField A, ScalarField B,
                                double alpha, double beta, DriftForm theta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    fail(ErrorCode::invalid_argument, "alpha and beta must be positive");
  require_same_grid(S, A);
  require_same_grid(S, B);
  require_same_grid(S, theta);
  ProblemData p;
  p.S = std::move(S);
  p.A = std::move(A);
  p.B = std::move(B);
  p.alpha = alpha;
  p.beta = beta;
  p.theta = std::move(theta);
  return p;
}

HypothesisReport validate(const ProblemData& problem, HypothesisMode mode,
                          double zero_tol, double div_tol) {
  HypothesisReport r;
  r.mode = mode;
  r.s_mean = integrate(problem.S);
  r.a_min = problem.A.min();
  r.a_max = problem.A.max();
  r.b_min = problem.B.min();
  r.theta_max_divergence = max_abs_divergence(problem.theta);

  r.a_nonnegative = r.a_min >= 0.0;
  r.a_not_identically_zero = r.a_max > zero_tol;
  r.b_nonnegative = r.b_min >= 0.0;
  r.s_mean_negative = r.s_mean < 0.0;
  r.theta_coclosed = r.theta_max_divergence <= div_tol;
  r.passed = r.a_nonnegative && r.a_not_identically_zero && r.b_nonnegative &&
             r.s_mean_negative && r.theta_coclosed;
  if (mode == HypothesisMode::strict) {
    r.a_strictly_positive = r.a_min > zero_tol;
    r.passed = r.passed && r.a_strictly_positive;
  }
  return r;
}

void require_hypotheses(const ProblemData& problem, HypothesisMode mode) {
  const HypothesisReport r = validate(problem, mode);
  if (r.passed) return;
  std::ostringstream os;
  os << "problem data violates the "
     << (mode == HypothesisMode::strict ? "strict" : "weak") << " hypotheses:";
  if (!r.a_nonnegative) os << " min A = " << r.a_min << " < 0;";
  if (!r.a_not_identically_zero) os << " A identically zero (max A = " << r.a_max << ");";
  if (mode == HypothesisMode::strict && !r.a_strictly_positive)
    os << " min A = " << r.a_min << " not strictly positive;";
  if (!r.b_nonnegative) os << " min B = " << r.b_min << " < 0;";
  if (!r.s_mean_negative) os << " integral of S = " << r.s_mean << " >= 0;";
  if (!r.theta_coclosed)
    os << " max |div theta| = " << r.theta_max_divergence << " exceeds tolerance;";
  fail(ErrorCode::hypothesis, os.str());
}

void check_exp_range(const ProblemData& problem, const ScalarField& u) {
  const double up = u.max();
  const double un = -u.min();
  if (problem.alpha * up > defaults::overflow_arg ||
      problem.beta * un > defaults::overflow_arg) {
    std::ostringstream os;
    os << "exponential argument out of range: alpha*max(u) = "
       << problem.alpha * up << ", beta*max(-u) = " << problem.beta * un
       << " (limit " << defaults::overflow_arg << ")";
    fail(ErrorCode::overflow, os.str());
  }
}

ScalarField residual(const ProblemData& problem, const ScalarField& u) {
  require_same_grid(u, problem.S);
  check_exp_range(problem, u);
  ScalarField out = apply_L(u, problem.theta);
  const double alpha = problem.alpha, beta = problem.beta;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] -= problem.S[i] + problem.A[i] * std::exp(alpha * u[i]) -
              problem.B[i] * std::exp(-beta * u[i]);
  return out;
}

ScalarField reaction_slope(const ProblemData& problem, const ScalarField& u) {
  require_same_grid(u, problem.S);
  check_exp_range(problem, u);
  const double alpha = problem.alpha, beta = problem.beta;
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = alpha * problem.A[i] * std::exp(alpha * u[i]) +
             beta * problem.B[i] * std::exp(-beta * u[i]);
  return ScalarField::from_values_unchecked(u.grid(), std::move(out));
}

ProblemData manufacture(const ScalarField& u_star, ScalarField A, ScalarField B,
                        double alpha, double beta, DriftForm theta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    fail(ErrorCode::invalid_argument, "alpha and beta must be positive");
  require_same_grid(u_star, A);
  require_same_grid(u_star, B);
  require_same_grid(u_star, theta);
  if (alpha * u_star.max() > defaults::overflow_arg ||
      beta * (-u_star.min()) > defaults::overflow_arg)
    fail(ErrorCode::overflow, "u_star too large for the exponential terms");

  ScalarField S = apply_L(u_star, theta);
  for (std::size_t i = 0; i < S.size(); ++i)
    S[i] -= A[i] * std::exp(alpha * u_star[i]) - B[i] * std::exp(-beta * u_star[i]);

  const double s_mean = integrate(S);
  if (!(s_mean < 0.0)) {
    std::ostringstream os;
    os << "manufactured S has integral " << s_mean
       << " >= 0; rescale u_star or enlarge A to restore the hypotheses";
    fail(ErrorCode::hypothesis, os.str());
  }
  return ProblemData::create(std::move(S), std::move(A), std::move(B), alpha,
                             beta, std::move(theta));
}

}  // namespace kw
