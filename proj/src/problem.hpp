#pragma once

/// Problem data for the generalized Kazdan-Warner equation
///   Lu - S - A e^{alpha u} + B e^{-beta u} = 0,  L = Laplacian - <d., theta>,
/// hypothesis validation, the residual operator, and manufactured problems.

#include "manifold.hpp"

namespace kw {

struct ProblemData {
  ScalarField S, A, B;
  double alpha = 1.0;
  double beta = 1.0;
  DriftForm theta;

  /// Checks alpha, beta > 0 and that all fields share one grid.
  static ProblemData create(ScalarField S, ScalarField A, ScalarField B,
                            double alpha, double beta, DriftForm theta);

  const GridPtr& grid() const { return S.grid(); }
};

enum class HypothesisMode { weak, strict };

struct HypothesisReport {
  HypothesisMode mode = HypothesisMode::weak;
  bool passed = false;
  // Per-condition outcomes.
  bool a_nonnegative = false;        // min A >= 0
  bool a_not_identically_zero = false;  // max A > zero_tol
  bool b_nonnegative = false;        // min B >= 0
  bool s_mean_negative = false;      // integral of S < 0
  bool theta_coclosed = false;       // max |div theta| <= div_tol
  bool a_strictly_positive = true;   // strict mode only: min A > zero_tol
  // Measured values backing the booleans.
  double s_mean = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
  double b_min = 0.0;
  double theta_max_divergence = 0.0;
};

HypothesisReport validate(const ProblemData& problem, HypothesisMode mode,
                          double zero_tol = defaults::zero_tol,
                          double div_tol = defaults::div_tol);

/// Throws ErrorCode::hypothesis when validation fails.
void require_hypotheses(const ProblemData& problem, HypothesisMode mode);

/// Lu - S - A e^{alpha u} + B e^{-beta u}. Refuses exp arguments beyond 700
/// instead of producing non-finite values.
ScalarField residual(const ProblemData& problem, const ScalarField& u);

/// alpha A e^{alpha u} + beta B e^{-beta u}, the u-derivative of the
/// reaction term; nonnegative under the weak hypotheses.
ScalarField reaction_slope(const ProblemData& problem, const ScalarField& u);

/// Guard shared by every evaluation of the exponential terms.
void check_exp_range(const ProblemData& problem, const ScalarField& u);

/// Defines S so that u_star solves the equation exactly on this grid:
/// S = L u_star - A e^{alpha u_star} + B e^{-beta u_star}. Errors when the
/// resulting S has nonnegative integral.
ProblemData manufacture(const ScalarField& u_star, ScalarField A, ScalarField B,
                        double alpha, double beta, DriftForm theta);

}  // namespace kw
