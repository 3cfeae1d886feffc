#pragma once

namespace kw::defaults {

// Threshold below which a field is treated as identically zero.
inline constexpr double zero_tol = 1e-12;

// Pointwise tolerance on the discrete divergence of an admissible drift form.
inline constexpr double div_tol = 1e-10;

// |mean of rhs| accepted (and re-centered) by the mean-zero linear solver.
inline constexpr double compatibility_tol = 1e-10;

// Slack for monotone-sequence checks (scaled by 1 + |value| where noted).
inline constexpr double monotone_slack = 1e-10;

// Required pointwise sign margin for super/subsolution residuals.
inline constexpr double strictness_margin = 1e-8;

// Slack when checking a-priori bounds against discrete solutions.
inline constexpr double bound_slack = 1e-6;

// Slack for the parabolic barrier containment check.
inline constexpr double barrier_slack = 1e-6;

// Pairwise sup-norm agreement tolerance between solvers.
inline constexpr double cross_tol = 1e-6;

// Headroom added when picking the barrier ODE initial value c0.
inline constexpr double c0_margin = 0.1;

// Additive headroom for the upper/lower solution constants b and m.
inline constexpr double upper_lower_margin = 0.1;

// Multiplicative headroom for the upper solution constant a.
inline constexpr double upper_lower_a_factor = 1.1;

// Multiplicative headroom for the monotone-iteration shift K.
inline constexpr double monotone_shift_factor = 1.05;

// exp() argument beyond which evaluation is refused instead of overflowing.
inline constexpr double overflow_arg = 700.0;

}  // namespace kw::defaults
