#include "elliptic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "krylov.hpp"
#include "linsolve.hpp"
#include "spectral.hpp"

namespace kw {

namespace {

const double* constant_theta(const DriftForm& theta,
                             std::array<double, kMaxDim>& storage) {
  if (theta.is_zero()) return nullptr;
  for (int a = 0; a < theta.grid()->dim(); ++a)
    storage[static_cast<size_t>(a)] = theta.constant_component(a);
  return storage.data();
}

double sup_residual_or_inf(const ProblemData& problem, const ScalarField& u) {
  try {
    return residual(problem, u).max_abs();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::overflow)
      return std::numeric_limits<double>::infinity();
    throw;
  }
}

}  // namespace

NewtonResult newton_solve(const ProblemData& problem, const ScalarField& u0,
                          double tol, int max_iter) {
  require_same_grid(u0, problem.S);
  require_hypotheses(problem, HypothesisMode::weak);
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "tol must be positive");

  const GridPtr& grid = problem.grid();
  SpectralWorkspace ws(grid);
  const bool const_theta = problem.theta.kind() != DriftForm::Kind::general;
  std::array<double, kMaxDim> tc{};
  const double* theta_c = const_theta ? constant_theta(problem.theta, tc) : nullptr;

  NewtonResult result;
  result.u = u0;
  ScalarField r = residual(problem, result.u);
  double rn = r.max_abs();
  result.residual_history.push_back(rn);

  for (int it = 0; it < max_iter; ++it) {
    if (rn <= tol) {
      result.converged = true;
      break;
    }
    const ScalarField slope = reaction_slope(problem, result.u);
    const double slope_mean = mean(slope);

    // Solve (L - slope) delta = -r.
    LinearOp op = [&](const std::vector<double>& x, std::vector<double>& y) {
      ScalarField fx = ScalarField::from_values_unchecked(grid, x);
      ScalarField lu = apply_L(fx, problem.theta);
      y.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = lu[i] - slope[i] * x[i];
    };
    LinearOp precond = [&](const std::vector<double>& x, std::vector<double>& y) {
      ScalarField fx = ScalarField::from_values_unchecked(grid, x);
      y = ws.solve(fx, -slope_mean, 1.0, theta_c).take();
    };

    // Inexact Newton forcing keeps the late iterations quadratic.
    const double lin_tol = std::max(std::min(0.1, rn) * rn * 1e-2, 1e-14);
    std::vector<double> delta(grid->node_count(), 0.0);
    std::vector<double> neg_r(r.vector());
    for (double& x : neg_r) x = -x;
    const KrylovResult lin = bicgstab(op, precond, neg_r, delta, lin_tol, 400);
    if (!lin.converged) {
      std::ostringstream os;
      os << "Newton linearized solve stalled at residual " << lin.residual_sup
         << " (target " << lin_tol << ")";
      fail(ErrorCode::no_convergence, os.str());
    }

    const ScalarField delta_field =
        ScalarField::from_values_unchecked(grid, std::move(delta));
    double step = 1.0;
    ScalarField candidate = add_scaled(result.u, step, delta_field);
    double cn = sup_residual_or_inf(problem, candidate);
    int halvings = 0;
    while (cn >= rn && halvings < 10) {
      step *= 0.5;
      candidate = add_scaled(result.u, step, delta_field);
      cn = sup_residual_or_inf(problem, candidate);
      ++halvings;
    }
    if (cn >= rn) {
      // Stagnated even after damping; report the partial result.
      result.iterations = it + 1;
      result.final_residual = rn;
      return result;
    }
    result.u = std::move(candidate);
    r = residual(problem, result.u);
    rn = r.max_abs();
    result.residual_history.push_back(rn);
    result.iterations = it + 1;
  }
  if (rn <= tol) result.converged = true;
  result.final_residual = rn;
  return result;
}

UpperLowerData build_upper_lower(const ProblemData& problem,
                                 const UpperLowerOptions& options) {
  require_hypotheses(problem, HypothesisMode::weak);

  UpperLowerData ul;
  ul.s_bar = integrate(problem.S);
  ul.a_bar = integrate(problem.A);
  if (!(ul.a_bar > 0.0))
    fail(ErrorCode::hypothesis, "upper/lower construction requires mean(A) > 0");

  ul.v1 = solve_linear_L(add_constant(problem.S, -ul.s_bar), problem.theta,
                         options.solve_tol);
  ul.v2 = solve_linear_L(add_constant(problem.A, -ul.a_bar), problem.theta,
                         options.solve_tol);
  ul.c1 = ul.v1.min();
  ul.c2 = ul.v2.min();

  const double alpha = problem.alpha, beta = problem.beta;
  const double sup_B = problem.B.max();
  const double sup_A = problem.A.max();
  const double sup_v1 = ul.v1.max();

  // a > -mean(S)/mean(A), with multiplicative headroom.
  const double a_floor = -ul.s_bar / ul.a_bar;
  ul.a = options.a.value_or(options.a_factor * std::max(a_floor, 1.0));
  if (!(ul.a > a_floor))
    fail(ErrorCode::invalid_argument, "chosen a violates a > -mean(S)/mean(A)");

  // b > (1/alpha) ln a - c1 - a c2, and when sup B > 0 also
  // b > -c1 - a c2 - (1/beta) ln((mean(S) + a mean(A))/sup B).
  double b_floor = std::log(ul.a) / alpha - ul.c1 - ul.a * ul.c2;
  if (sup_B > defaults::zero_tol) {
    const double b2 = -ul.c1 - ul.a * ul.c2 -
                      std::log((ul.s_bar + ul.a * ul.a_bar) / sup_B) / beta;
    b_floor = std::max(b_floor, b2);
  }
  ul.b = options.b.value_or(std::max(b_floor, 0.0) + options.margin);
  if (!(ul.b > b_floor) || !(ul.b > 0.0))
    fail(ErrorCode::invalid_argument, "chosen b violates its lower bounds");

  // m > sup v1 - (1/alpha) ln(-mean(S)/sup A) and m > -a c2 - b.
  const double m1 = sup_v1 - std::log(-ul.s_bar / sup_A) / alpha;
  const double m2 = -ul.a * ul.c2 - ul.b;
  const double m_floor = std::max(m1, m2);
  ul.m = options.m.value_or(std::max(m_floor, 0.0) + options.margin);
  if (!(ul.m > m_floor) || !(ul.m > 0.0))
    fail(ErrorCode::invalid_argument, "chosen m violates its lower bounds");

  ul.u_plus = add_constant(add_scaled(ul.v1, ul.a, ul.v2), ul.b);
  ul.u_minus = add_constant(ul.v1, -ul.m);

  for (std::size_t i = 0; i < ul.u_plus.size(); ++i)
    if (!(ul.u_minus[i] < ul.u_plus[i]))
      fail(ErrorCode::internal, "u_minus does not lie strictly below u_plus");

  ul.sup_residual_plus = residual(problem, ul.u_plus).max();
  ul.min_residual_minus = residual(problem, ul.u_minus).min();
  if (!(ul.sup_residual_plus <= -options.strictness_margin) ||
      !(ul.min_residual_minus >= options.strictness_margin)) {
    std::ostringstream os;
    os << "super/subsolution sign check failed (sup residual(u+) = "
       << ul.sup_residual_plus << ", min residual(u-) = "
       << ul.min_residual_minus
       << "); this indicates discretization error - refine the grid";
    fail(ErrorCode::monotonicity, os.str());
  }
  return ul;
}

MonotoneResult monotone_solve(const ProblemData& problem,
                              const UpperLowerData& ul, double tol,
                              int max_iter, bool store_iterates) {
  require_hypotheses(problem, HypothesisMode::weak);
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "tol must be positive");

  const double lo = ul.u_minus.min();
  const double hi = ul.u_plus.max();
  const double alpha = problem.alpha, beta = problem.beta;
  if (alpha * hi > defaults::overflow_arg || beta * (-lo) > defaults::overflow_arg)
    fail(ErrorCode::overflow, "enclosure interval too large for the exponentials");

  // K bounds the reaction slope over [min u-, max u+]; the slope is convex in
  // u, so per node it peaks at one of the interval endpoints.
  double k_max = 0.0;
  for (std::size_t i = 0; i < ul.u_plus.size(); ++i) {
    const double g_lo = alpha * problem.A[i] * std::exp(alpha * lo) +
                        beta * problem.B[i] * std::exp(-beta * lo);
    const double g_hi = alpha * problem.A[i] * std::exp(alpha * hi) +
                        beta * problem.B[i] * std::exp(-beta * hi);
    k_max = std::max(k_max, std::max(g_lo, g_hi));
  }
  MonotoneResult result;
  result.shift = defaults::monotone_shift_factor * k_max;
  if (!(result.shift > 0.0))
    fail(ErrorCode::hypothesis, "monotone shift is zero; A and B vanish");

  const GridPtr& grid = problem.grid();
  SpectralWorkspace ws(grid);
  const bool const_theta = problem.theta.kind() != DriftForm::Kind::general;
  std::array<double, kMaxDim> tc{};
  const double* theta_c = const_theta ? constant_theta(problem.theta, tc) : nullptr;

  auto solve_shift = [&](const ScalarField& rhs) {
    if (const_theta) return ws.solve(rhs, -result.shift, 1.0, theta_c);
    return solve_shifted_L(rhs, problem.theta, result.shift,
                           std::min(1e-12, 0.01 * tol));
  };

  ScalarField u = ul.u_plus;
  result.iterates_monotone = true;
  result.min_enclosure_margin = std::numeric_limits<double>::infinity();
  if (store_iterates) result.iterates.push_back(u);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> rhs(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      rhs[i] = problem.S[i] + problem.A[i] * std::exp(alpha * u[i]) -
               problem.B[i] * std::exp(-beta * u[i]) - result.shift * u[i];
    ScalarField next =
        solve_shift(ScalarField::from_values_unchecked(grid, std::move(rhs)));

    double increase = -std::numeric_limits<double>::infinity();
    double enclosure = std::numeric_limits<double>::infinity();
    double step = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      increase = std::max(increase, next[i] - u[i]);
      enclosure = std::min(enclosure, next[i] - ul.u_minus[i]);
      step = std::max(step, std::abs(next[i] - u[i]));
    }
    result.min_enclosure_margin = std::min(result.min_enclosure_margin, enclosure);
    if (increase > defaults::monotone_slack || enclosure < -defaults::monotone_slack) {
      result.iterates_monotone = false;
      std::ostringstream os;
      os << "monotone iteration violated its ordering (max increase = "
         << increase << ", min margin above u_minus = " << enclosure
         << "); K may be too small or the grid too coarse";
      fail(ErrorCode::monotonicity, os.str());
    }

    u = std::move(next);
    result.step_norms.push_back(step);
    result.iterations = it + 1;
    if (store_iterates) result.iterates.push_back(u);
    if (step <= tol) {
      result.converged = true;
      break;
    }
  }
  result.final_residual = residual(problem, u).max_abs();
  result.u = std::move(u);
  return result;
}

CrossValidation cross_validate(std::span<const ScalarField> solutions, double tol) {
  if (solutions.size() < 2)
    fail(ErrorCode::invalid_argument, "cross validation needs at least two solutions");
  CrossValidation cv;
  cv.tol = tol;
  for (std::size_t i = 0; i < solutions.size(); ++i)
    for (std::size_t j = i + 1; j < solutions.size(); ++j) {
      const double d = max_abs_diff(solutions[i], solutions[j]);
      cv.pairwise.push_back(d);
      cv.max_diff = std::max(cv.max_diff, d);
    }
  cv.pass = cv.max_diff <= tol;
  return cv;
}

}  // namespace kw
