#include "krylov.hpp"

#include <cmath>
#include <cstddef>

namespace kw {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
  return static_cast<double>(acc);
}

double sup(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

KrylovResult bicgstab(const LinearOp& op, const LinearOp& precond,
                      const std::vector<double>& rhs, std::vector<double>& x,
                      double sup_tol, int max_iter) {
  const std::size_t n = rhs.size();
  std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), t(n);
  std::vector<double> phat(n), shat(n), ax(n);

  auto apply_precond = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (precond)
      precond(in, out);
    else
      out = in;
  };

  op(x, ax);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
  rhat = r;

  KrylovResult res;
  res.residual_sup = sup(r);
  if (res.residual_sup <= sup_tol) {
    res.converged = true;
    return res;
  }

  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const double breakdown = 1e-300;

  for (int it = 1; it <= max_iter; ++it) {
    const double rho_new = dot(rhat, r);
    if (std::abs(rho_new) < breakdown) {
      // Restart with the current residual as the shadow vector.
      rhat = r;
      rho = dot(rhat, r);
      if (std::abs(rho) < breakdown) break;
      p = r;
    } else {
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }

    apply_precond(p, phat);
    op(phat, v);
    const double rhat_v = dot(rhat, v);
    if (std::abs(rhat_v) < breakdown) break;
    alpha = rho / rhat_v;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];

    if (sup(s) <= sup_tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
      op(x, ax);
      for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
      res.residual_sup = sup(r);
      res.iterations = it;
      if (res.residual_sup <= sup_tol) {
        res.converged = true;
        return res;
      }
      continue;
    }

    apply_precond(s, shat);
    op(shat, t);
    const double tt = dot(t, t);
    if (tt < breakdown) break;
    omega = dot(t, s) / tt;
    if (std::abs(omega) < breakdown) break;

    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
    for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];

    // Recompute the true residual periodically; the recursion drifts.
    if (it % 50 == 0) {
      op(x, ax);
      for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
    }

    res.residual_sup = sup(r);
    res.iterations = it;
    if (res.residual_sup <= sup_tol) {
      op(x, ax);
      for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
      res.residual_sup = sup(r);
      if (res.residual_sup <= sup_tol) {
        res.converged = true;
        return res;
      }
    }
  }

  op(x, ax);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
  res.residual_sup = sup(r);
  res.converged = res.residual_sup <= sup_tol;
  return res;
}

}  // namespace kw
