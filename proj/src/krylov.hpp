#pragma once

/// Matrix-free preconditioned BiCGSTAB. The operator L - <d., theta> is not
/// symmetric once theta != 0, so a nonsymmetric-capable iteration is required.

#include <functional>
#include <vector>

namespace kw {

using LinearOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double residual_sup = 0.0;
};

/// Solves op(x) = rhs, starting from the given x, until the true residual
/// satisfies ||rhs - op(x)||_inf <= sup_tol. `precond` may be empty.
KrylovResult bicgstab(const LinearOp& op, const LinearOp& precond,
                      const std::vector<double>& rhs, std::vector<double>& x,
                      double sup_tol, int max_iter);

}  // namespace kw
