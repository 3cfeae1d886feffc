#pragma once

/// Explicit a-priori bounds on solutions, computed from the data alone, and
/// their verification against computed solutions: the maximum-principle lower
/// bound u >= min(w) - t0, the L2 bound with constant 144/alpha^6, and the
/// qualitative p-norm ladder toward the sup norm.

#include <vector>

#include "problem.hpp"

namespace kw {

struct LowerBound {
  double C = 0.0;   // the guarantee reads u >= min(w) - t0 = -C
  double t0 = 0.0;
  ScalarField w;    // mean-zero solution of L w = S - mean(S)
};

/// Requires max A > 0 and mean(S) < 0.
LowerBound lower_bound(const ProblemData& problem, double solve_tol = 1e-12);

/// sqrt(C^2 + (144/alpha^6) eta^{-2} |S|_2^2 + (C_tilde (144/alpha^6) eta^{-2} + 3))
/// with eta = min A > 0 and C_tilde = e^{beta C} max B. Vol(M) = 1 throughout.
double l2_upper_bound(const ProblemData& problem, double C);

struct BoundsReport {
  double lower_bound_C = 0.0;
  double t0 = 0.0;
  double w_sup_norm = 0.0;  // max |w|
  double eta = 0.0;         // min A
  double c_tilde = 0.0;
  double l2_bound = 0.0;    // NaN when skipped
  double min_u = 0.0;
  double l2_norm_u = 0.0;
  bool lower_pass = false;
  double lower_margin = 0.0;  // min u - (min w - t0)
  int l2_evaluated = 0;       // 0: skipped (weak hypotheses only)
  bool l2_pass = false;
  double l2_margin = 0.0;     // l2_bound - ||u||_2
  bool passed = false;
};

/// Checks min u >= (min w - t0) - slack and, under the strict hypotheses,
/// ||u||_2 <= l2 bound. Report-only: never throws on a failed check.
BoundsReport verify_solution_bounds(const ProblemData& problem,
                                    const ScalarField& u,
                                    double slack = defaults::bound_slack);

/// ||u||_{L^{p0 * 2^k}} for k = 0..levels; nondecreasing on the unit-volume
/// torus and converging to the sup norm.
std::vector<double> norm_ladder(const ScalarField& u, double p0, int levels);

}  // namespace kw
