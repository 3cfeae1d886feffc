#include "linsolve.hpp"

#include <cmath>
#include <sstream>

#include "krylov.hpp"
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

void subtract_mean_inplace(std::vector<double>& v, double weight) {
  long double acc = 0.0L;
  for (double x : v) acc += static_cast<long double>(x);
  // weight * count = 1, so the mean is weight * sum.
  const double m = static_cast<double>(acc) * weight;
  for (double& x : v) x -= m;
}

}  // namespace

ScalarField solve_linear_L(const ScalarField& f, const DriftForm& theta,
                           double tol, int max_iter, double compatibility_tol) {
  require_same_grid(f, theta);
  const GridPtr& grid = f.grid();

  const double fbar = integrate(f);
  if (std::abs(fbar) > compatibility_tol) {
    std::ostringstream os;
    os << "incompatible right-hand side: integral is " << fbar
       << " but L only reaches mean-zero fields";
    fail(ErrorCode::incompatible_rhs, os.str());
  }
  const ScalarField g = add_constant(f, -fbar);

  if (theta.kind() != DriftForm::Kind::general) {
    SpectralWorkspace ws(grid);
    std::array<double, kMaxDim> tc{};
    ScalarField u = ws.solve(g, 0.0, 1.0, constant_theta(theta, tc));
    return u;
  }

  SpectralWorkspace ws(grid);
  const double weight = grid->node_weight();
  LinearOp op = [&](const std::vector<double>& x, std::vector<double>& y) {
    ScalarField fx = ScalarField::from_values_unchecked(grid, x);
    y = apply_L(fx, theta).take();
  };
  LinearOp precond = [&](const std::vector<double>& x, std::vector<double>& y) {
    std::vector<double> xc = x;
    subtract_mean_inplace(xc, weight);
    ScalarField fx = ScalarField::from_values_unchecked(grid, std::move(xc));
    y = ws.solve(fx, 0.0, 1.0, nullptr).take();
  };

  std::vector<double> x(grid->node_count(), 0.0);
  const KrylovResult res = bicgstab(op, precond, g.vector(), x, tol, max_iter);
  if (!res.converged) {
    std::ostringstream os;
    os << "mean-zero solve against L stalled at residual " << res.residual_sup
       << " after " << res.iterations << " iterations (tol " << tol << ")";
    fail(ErrorCode::no_convergence, os.str());
  }
  subtract_mean_inplace(x, weight);
  return ScalarField::from_values_unchecked(grid, std::move(x));
}

ScalarField solve_shifted_L(const ScalarField& f, const DriftForm& theta,
                            double shift, double tol, int max_iter) {
  require_same_grid(f, theta);
  if (!(shift > 0.0))
    fail(ErrorCode::invalid_argument, "solve_shifted_L requires shift > 0");
  const GridPtr& grid = f.grid();
  SpectralWorkspace ws(grid);

  if (theta.kind() != DriftForm::Kind::general) {
    std::array<double, kMaxDim> tc{};
    return ws.solve(f, -shift, 1.0, constant_theta(theta, tc));
  }

  LinearOp op = [&](const std::vector<double>& x, std::vector<double>& y) {
    ScalarField fx = ScalarField::from_values_unchecked(grid, x);
    ScalarField lu = apply_L(fx, theta);
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = lu[i] - shift * x[i];
  };
  LinearOp precond = [&](const std::vector<double>& x, std::vector<double>& y) {
    ScalarField fx = ScalarField::from_values_unchecked(grid, x);
    y = ws.solve(fx, -shift, 1.0, nullptr).take();
  };

  std::vector<double> x(grid->node_count(), 0.0);
  const KrylovResult res = bicgstab(op, precond, f.vector(), x, tol, max_iter);
  if (!res.converged) {
    std::ostringstream os;
    os << "shifted solve against (L - " << shift << ") stalled at residual "
       << res.residual_sup << " after " << res.iterations << " iterations";
    fail(ErrorCode::no_convergence, os.str());
  }
  return ScalarField::from_values_unchecked(grid, std::move(x));
}

}  // namespace kw
