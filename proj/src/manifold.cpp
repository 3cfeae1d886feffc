#include "manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kw {

namespace {

long double accumulate_ld(std::span<const double> v) {
  long double acc = 0.0L;
  for (double x : v) acc += static_cast<long double>(x);
  return acc;
}

}  // namespace

// -- Grid ---------------------------------------------------------------------

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  node_count_ = 1;
  double volume = 1.0;
  for (int a = 0; a < spec_.dim; ++a) {
    const auto ia = static_cast<size_t>(a);
    spacing_[ia] = spec_.periods[ia] / static_cast<double>(spec_.points[ia]);
    node_count_ *= static_cast<std::size_t>(spec_.points[ia]);
    volume *= spec_.periods[ia];
  }
  node_weight_ = volume / static_cast<double>(node_count_);
  // Row-major, last axis fastest.
  std::size_t s = 1;
  for (int a = spec_.dim - 1; a >= 0; --a) {
    stride_[static_cast<size_t>(a)] = s;
    s *= static_cast<std::size_t>(spec_.points[static_cast<size_t>(a)]);
  }
}

GridPtr Grid::create(const GridSpec& spec) {
  if (spec.dim < 1 || spec.dim > kMaxDim)
    fail(ErrorCode::invalid_argument, "grid dimension must be 1, 2 or 3");
  double volume = 1.0;
  for (int a = 0; a < spec.dim; ++a) {
    const auto ia = static_cast<size_t>(a);
    if (spec.points[ia] < 4) {
      std::ostringstream os;
      os << "axis " << a << " has " << spec.points[ia]
         << " points; at least 4 are required for central stencils";
      fail(ErrorCode::invalid_argument, os.str());
    }
    if (!(spec.periods[ia] > 0.0))
      fail(ErrorCode::invalid_argument, "grid periods must be positive");
    volume *= spec.periods[ia];
  }
  if (std::abs(volume - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "torus volume is " << volume << "; the periods must multiply to 1";
    fail(ErrorCode::invalid_argument, os.str());
  }
  GridPtr grid(new Grid(spec));
  if (std::abs(grid->node_weight() * static_cast<double>(grid->node_count()) - 1.0) > 1e-14)
    fail(ErrorCode::internal, "quadrature weights do not sum to 1");
  return grid;
}

bool Grid::same_as(const Grid& other) const {
  if (this == &other) return true;
  if (spec_.dim != other.spec_.dim) return false;
  for (int a = 0; a < spec_.dim; ++a) {
    const auto ia = static_cast<size_t>(a);
    if (spec_.points[ia] != other.spec_.points[ia]) return false;
    if (spec_.periods[ia] != other.spec_.periods[ia]) return false;
  }
  return true;
}

GridPtr build_grid(const GridSpec& spec) { return Grid::create(spec); }

// -- ScalarField ----------------------------------------------------------------

ScalarField ScalarField::zeros(GridPtr grid) {
  std::vector<double> v(grid->node_count(), 0.0);
  return ScalarField(std::move(grid), std::move(v));
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
  if (!std::isfinite(value))
    fail(ErrorCode::invalid_argument, "field value must be finite");
  std::vector<double> v(grid->node_count(), value);
  return ScalarField(std::move(grid), std::move(v));
}

ScalarField ScalarField::from_values(GridPtr grid, std::vector<double> values) {
  if (values.size() != grid->node_count())
    fail(ErrorCode::invalid_argument, "value count does not match the grid");
  for (double x : values)
    if (!std::isfinite(x))
      fail(ErrorCode::invalid_argument, "field contains a non-finite value");
  return ScalarField(std::move(grid), std::move(values));
}

ScalarField ScalarField::from_values_unchecked(GridPtr grid, std::vector<double> values) {
  return ScalarField(std::move(grid), std::move(values));
}

ScalarField ScalarField::sample(
    GridPtr grid, const std::function<double(const std::array<double, kMaxDim>&)>& fn) {
  std::vector<double> v(grid->node_count());
  std::array<double, kMaxDim> x{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    grid->coords(i, x);
    v[i] = fn(x);
  }
  return from_values(std::move(grid), std::move(v));
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

bool ScalarField::all_finite() const {
  for (double x : values_)
    if (!std::isfinite(x)) return false;
  return true;
}

// -- DriftForm --------------------------------------------------------------------

DriftForm DriftForm::zero(GridPtr grid) {
  DriftForm theta;
  theta.kind_ = Kind::zero;
  theta.grid_ = grid;
  for (int a = 0; a < grid->dim(); ++a)
    theta.components_.push_back(ScalarField::zeros(grid));
  return theta;
}

DriftForm DriftForm::constant(GridPtr grid, std::span<const double> components) {
  if (static_cast<int>(components.size()) != grid->dim())
    fail(ErrorCode::invalid_argument, "drift needs one component per axis");
  bool all_zero = true;
  for (double c : components) {
    if (!std::isfinite(c))
      fail(ErrorCode::invalid_argument, "drift component must be finite");
    if (c != 0.0) all_zero = false;
  }
  if (all_zero) return zero(std::move(grid));
  DriftForm theta;
  theta.kind_ = Kind::constant;
  theta.grid_ = grid;
  for (int a = 0; a < grid->dim(); ++a) {
    theta.constant_[static_cast<size_t>(a)] = components[static_cast<size_t>(a)];
    theta.components_.push_back(
        ScalarField::constant(grid, components[static_cast<size_t>(a)]));
  }
  return theta;
}

DriftForm DriftForm::stream2d(const ScalarField& psi) {
  const GridPtr& grid = psi.grid();
  if (grid->dim() != 2)
    fail(ErrorCode::invalid_argument, "stream-function drift requires a 2D grid");
  std::vector<double> tx(grid->node_count(), 0.0), ty(grid->node_count(), 0.0);
  const double inv2hy = 1.0 / (2.0 * grid->spacing(1));
  axis_pass(*grid, 1, [&](std::size_t n, std::size_t np, std::size_t nm) {
    tx[n] = (psi[np] - psi[nm]) * inv2hy;
  });
  const double inv2hx = 1.0 / (2.0 * grid->spacing(0));
  axis_pass(*grid, 0, [&](std::size_t n, std::size_t np, std::size_t nm) {
    ty[n] = -(psi[np] - psi[nm]) * inv2hx;
  });
  std::vector<ScalarField> comps;
  comps.push_back(ScalarField::from_values_unchecked(grid, std::move(tx)));
  comps.push_back(ScalarField::from_values_unchecked(grid, std::move(ty)));
  return from_components(std::move(comps));
}

DriftForm DriftForm::from_components(std::vector<ScalarField> components) {
  if (components.empty())
    fail(ErrorCode::invalid_argument, "drift needs at least one component");
  const GridPtr grid = components.front().grid();
  if (static_cast<int>(components.size()) != grid->dim())
    fail(ErrorCode::invalid_argument, "drift needs one component per axis");
  bool constant = true;
  for (const auto& c : components) {
    if (!c.grid()->same_as(*grid))
      fail(ErrorCode::grid_mismatch, "drift components live on different grids");
    if (!c.all_finite())
      fail(ErrorCode::invalid_argument, "drift component has non-finite values");
    const double first = c[0];
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] != first) {
        constant = false;
        break;
      }
    if (!constant) break;
  }
  if (constant) {
    std::array<double, kMaxDim> vals{};
    for (int a = 0; a < grid->dim(); ++a) vals[static_cast<size_t>(a)] = components[static_cast<size_t>(a)][0];
    return DriftForm::constant(grid, std::span<const double>(vals.data(), static_cast<size_t>(grid->dim())));
  }
  DriftForm theta;
  theta.kind_ = Kind::general;
  theta.grid_ = grid;
  theta.components_ = std::move(components);
  return theta;
}

// -- operators --------------------------------------------------------------------

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!a.grid()->same_as(*b.grid()))
    fail(ErrorCode::grid_mismatch, "fields live on different grids");
}

void require_same_grid(const ScalarField& a, const DriftForm& theta) {
  if (!a.grid()->same_as(*theta.grid()))
    fail(ErrorCode::grid_mismatch, "field and drift live on different grids");
}

ScalarField laplacian(const ScalarField& u) {
  const Grid& g = *u.grid();
  std::vector<double> out(u.size(), 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
    axis_pass(g, a, [&](std::size_t n, std::size_t np, std::size_t nm) {
      out[n] += (u[np] - 2.0 * u[n] + u[nm]) * inv_h2;
    });
  }
  return ScalarField::from_values_unchecked(u.grid(), std::move(out));
}

ScalarField drift_term(const ScalarField& u, const DriftForm& theta) {
  require_same_grid(u, theta);
  const Grid& g = *u.grid();
  std::vector<double> out(u.size(), 0.0);
  if (theta.is_zero())
    return ScalarField::from_values_unchecked(u.grid(), std::move(out));
  for (int a = 0; a < g.dim(); ++a) {
    const double inv2h = 1.0 / (2.0 * g.spacing(a));
    const ScalarField& ta = theta.component(a);
    axis_pass(g, a, [&](std::size_t n, std::size_t np, std::size_t nm) {
      out[n] += ta[n] * (u[np] - u[nm]) * inv2h;
    });
  }
  return ScalarField::from_values_unchecked(u.grid(), std::move(out));
}

ScalarField apply_L(const ScalarField& u, const DriftForm& theta) {
  require_same_grid(u, theta);
  const Grid& g = *u.grid();
  std::vector<double> out(u.size(), 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
    if (theta.is_zero()) {
      axis_pass(g, a, [&](std::size_t n, std::size_t np, std::size_t nm) {
        out[n] += (u[np] - 2.0 * u[n] + u[nm]) * inv_h2;
      });
    } else {
      const double inv2h = 1.0 / (2.0 * g.spacing(a));
      const ScalarField& ta = theta.component(a);
      axis_pass(g, a, [&](std::size_t n, std::size_t np, std::size_t nm) {
        out[n] += (u[np] - 2.0 * u[n] + u[nm]) * inv_h2 -
                  ta[n] * (u[np] - u[nm]) * inv2h;
      });
    }
  }
  return ScalarField::from_values_unchecked(u.grid(), std::move(out));
}

ScalarField divergence(const DriftForm& theta) {
  const Grid& g = *theta.grid();
  std::vector<double> out(g.node_count(), 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    const double inv2h = 1.0 / (2.0 * g.spacing(a));
    const ScalarField& ta = theta.component(a);
    axis_pass(g, a, [&](std::size_t n, std::size_t np, std::size_t nm) {
      out[n] += (ta[np] - ta[nm]) * inv2h;
    });
  }
  return ScalarField::from_values_unchecked(theta.grid(), std::move(out));
}

double max_abs_divergence(const DriftForm& theta) {
  if (theta.is_zero()) return 0.0;
  return divergence(theta).max_abs();
}

bool drift_is_negligible(const DriftForm& theta, double tol) {
  if (theta.is_zero()) return true;
  for (int a = 0; a < theta.grid()->dim(); ++a)
    if (theta.component(a).max_abs() > tol) return false;
  return true;
}

// -- integration and norms ----------------------------------------------------

double integrate(const ScalarField& f) {
  return static_cast<double>(accumulate_ld(f.values()) *
                             static_cast<long double>(f.grid()->node_weight()));
}

double mean(const ScalarField& f) { return integrate(f); }

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += static_cast<long double>(f[i]) * static_cast<long double>(g[i]);
  return static_cast<double>(acc * static_cast<long double>(f.grid()->node_weight()));
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p) && p > 0) return f.max_abs();
  if (!(p >= 1.0))
    fail(ErrorCode::invalid_argument, "lp_norm requires p >= 1 or p = infinity");
  const double m = f.max_abs();
  if (m == 0.0) return 0.0;
  // Scale by the max so that large p cannot overflow.
  long double acc = 0.0L;
  for (double x : f.values())
    acc += powl(static_cast<long double>(std::abs(x) / m), static_cast<long double>(p));
  acc *= static_cast<long double>(f.grid()->node_weight());
  return m * static_cast<double>(powl(acc, 1.0L / static_cast<long double>(p)));
}

// -- field algebra ------------------------------------------------------------

ScalarField add(const ScalarField& a, const ScalarField& b) {
  return zip_fields(a, b, [](double x, double y) { return x + y; });
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  return zip_fields(a, b, [](double x, double y) { return x - y; });
}

ScalarField add_scaled(const ScalarField& a, double c, const ScalarField& b) {
  return zip_fields(a, b, [c](double x, double y) { return x + c * y; });
}

ScalarField scale(const ScalarField& a, double c) {
  return map_field(a, [c](double x) { return c * x; });
}

ScalarField add_constant(const ScalarField& a, double c) {
  return map_field(a, [c](double x) { return x + c; });
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace kw
