#pragma once

/// Linear solves against L = Laplacian - <d., theta>. Constant drifts go
/// through the exact Fourier-diagonal path; general (stream-function) drifts
/// use BiCGSTAB restricted to the mean-zero subspace with a spectral
/// preconditioner.

#include "manifold.hpp"

namespace kw {

/// Solves L u = f for the mean-zero u. The right-hand side must satisfy
/// |integral of f| <= compatibility_tol; it is re-centered before solving.
/// On return ||L u - f_centered||_inf <= tol.
ScalarField solve_linear_L(const ScalarField& f, const DriftForm& theta,
                           double tol = 1e-12, int max_iter = 2000,
                           double compatibility_tol = defaults::compatibility_tol);

/// Solves (L - shift) u = f with shift > 0 (always invertible).
ScalarField solve_shifted_L(const ScalarField& f, const DriftForm& theta,
                            double shift, double tol = 1e-12, int max_iter = 2000);

}  // namespace kw
