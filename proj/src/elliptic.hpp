#pragma once

/// Stationary solvers: damped Newton iteration, the constructive
/// upper/lower-solution pair (u- = v1 - m, u+ = v1 + a v2 + b), and the
/// monotone iteration squeezed between them. cross_validate compares
/// solutions produced by different routes.

#include <optional>
#include <span>
#include <vector>

#include "problem.hpp"

namespace kw {

struct NewtonResult {
  ScalarField u;
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;  // sup-norm per iterate, u0 first
};

/// Each step solves (L - alpha A e^{alpha u} - beta B e^{-beta u}) delta =
/// -residual(u); full steps with up to 10 halvings when the residual sup-norm
/// fails to decrease.
NewtonResult newton_solve(const ProblemData& problem, const ScalarField& u0,
                          double tol = 1e-12, int max_iter = 50);

struct UpperLowerOptions {
  double a_factor = defaults::upper_lower_a_factor;
  double margin = defaults::upper_lower_margin;
  double strictness_margin = defaults::strictness_margin;
  double solve_tol = 1e-12;
  // Explicit choices override the automatic ones; they are still validated
  // against the constraints.
  std::optional<double> a, b, m;
};

struct UpperLowerData {
  ScalarField v1, v2;       // mean-zero solutions of L v1 = S - mean(S), L v2 = A - mean(A)
  ScalarField u_plus, u_minus;
  double s_bar = 0.0, a_bar = 0.0;
  double a = 0.0, b = 0.0, m = 0.0;
  double c1 = 0.0, c2 = 0.0;  // min v1, min v2
  double sup_residual_plus = 0.0;   // must be <= -strictness_margin
  double min_residual_minus = 0.0;  // must be >= +strictness_margin
};

UpperLowerData build_upper_lower(const ProblemData& problem,
                                 const UpperLowerOptions& options = {});

struct MonotoneResult {
  ScalarField u;
  bool converged = false;
  bool iterates_monotone = false;
  int iterations = 0;
  double shift = 0.0;  // the constant K of the iteration
  double final_residual = 0.0;
  double min_enclosure_margin = 0.0;  // min over iterates of min(u_k - u_minus)
  std::vector<double> step_norms;     // ||u_{k+1} - u_k||_inf per step
  std::vector<ScalarField> iterates;  // filled when store_iterates
};

/// Iterates u_{k+1} = (L - K)^{-1}(S + A e^{alpha u_k} - B e^{-beta u_k} - K u_k)
/// from u_plus; the sequence decreases pointwise and stays above u_minus.
/// Stops when ||u_{k+1} - u_k||_inf <= tol.
MonotoneResult monotone_solve(const ProblemData& problem,
                              const UpperLowerData& ul, double tol,
                              int max_iter = 20000, bool store_iterates = false);

struct CrossValidation {
  double max_diff = 0.0;
  std::vector<double> pairwise;  // row-major upper triangle, (0,1), (0,2), ...
  double tol = defaults::cross_tol;
  bool pass = false;
};

CrossValidation cross_validate(std::span<const ScalarField> solutions,
                               double tol = defaults::cross_tol);

}  // namespace kw
