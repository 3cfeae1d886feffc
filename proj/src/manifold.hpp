#pragma once

/// Discrete flat-torus geometry: periodic grids, scalar fields, the drift
/// operator L = Laplacian - <d., theta>, integration and norms. All stencils
/// are 2nd-order central differences with periodic wrap, so the Laplacian is
/// exactly self-adjoint and central-difference-divergence-free drift forms
/// integrate to zero against any composed field.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "defaults.hpp"
#include "errors.hpp"

namespace kw {

inline constexpr int kMaxDim = 3;

struct GridSpec {
  int dim = 0;
  std::array<int, kMaxDim> points{};     // N_i, first `dim` entries used
  std::array<double, kMaxDim> periods{}; // L_i, product must be 1
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Uniform periodic grid on a unit-volume flat torus. Node (j_1..j_n) sits at
/// coordinates (j_i * h_i) with h_i = L_i / N_i; storage is row-major with the
/// last axis fastest.
class Grid {
 public:
  static GridPtr create(const GridSpec& spec);

  int dim() const { return spec_.dim; }
  int points(int axis) const { return spec_.points[static_cast<size_t>(axis)]; }
  double period(int axis) const { return spec_.periods[static_cast<size_t>(axis)]; }
  double spacing(int axis) const { return spacing_[static_cast<size_t>(axis)]; }
  double node_weight() const { return node_weight_; }
  std::size_t node_count() const { return node_count_; }
  std::size_t stride(int axis) const { return stride_[static_cast<size_t>(axis)]; }

  /// Coordinate of a node along one axis.
  double coord(std::size_t node, int axis) const {
    const auto a = static_cast<size_t>(axis);
    const std::size_t j = (node / stride_[a]) % static_cast<std::size_t>(spec_.points[a]);
    return static_cast<double>(j) * spacing_[a];
  }

  void coords(std::size_t node, std::array<double, kMaxDim>& x) const {
    for (int a = 0; a < spec_.dim; ++a) x[static_cast<size_t>(a)] = coord(node, a);
  }

  bool same_as(const Grid& other) const;

  const GridSpec& spec() const { return spec_; }

 private:
  explicit Grid(const GridSpec& spec);

  GridSpec spec_;
  std::array<double, kMaxDim> spacing_{};
  std::array<std::size_t, kMaxDim> stride_{};
  double node_weight_ = 0.0;
  std::size_t node_count_ = 0;
};

/// build_grid: validated Grid construction from a GridSpec.
GridPtr build_grid(const GridSpec& spec);

/// Real values at grid nodes, row-major.
class ScalarField {
 public:
  ScalarField() = default;

  static ScalarField zeros(GridPtr grid);
  static ScalarField constant(GridPtr grid, double value);
  /// Validates length and finiteness.
  static ScalarField from_values(GridPtr grid, std::vector<double> values);
  /// Internal fast path: trusts the caller on length and finiteness.
  static ScalarField from_values_unchecked(GridPtr grid, std::vector<double> values);
  static ScalarField sample(
      GridPtr grid,
      const std::function<double(const std::array<double, kMaxDim>&)>& fn);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& vector() const { return values_; }
  std::vector<double> take() && { return std::move(values_); }

  double min() const;
  double max() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  ScalarField(GridPtr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {}

  GridPtr grid_;
  std::vector<double> values_;
};

/// The 1-form theta as one component field per axis. Admissible drifts are
/// discretely divergence-free; construction from arbitrary components is
/// permitted so that hypothesis validation can report the violation.
class DriftForm {
 public:
  enum class Kind { zero, constant, general };

  /// Empty (no grid); assign a factory result before use.
  DriftForm() = default;

  static DriftForm zero(GridPtr grid);
  static DriftForm constant(GridPtr grid, std::span<const double> components);
  /// 2D curl of a stream field: theta = (D_y psi, -D_x psi); divergence-free
  /// by commutation of the central differences.
  static DriftForm stream2d(const ScalarField& psi);
  static DriftForm from_components(std::vector<ScalarField> components);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::zero; }
  const GridPtr& grid() const { return grid_; }
  const ScalarField& component(int axis) const {
    return components_[static_cast<size_t>(axis)];
  }
  /// Only meaningful for Kind::constant (and zero, where it is 0).
  double constant_component(int axis) const {
    return constant_[static_cast<size_t>(axis)];
  }

 private:
  Kind kind_ = Kind::zero;
  GridPtr grid_;
  std::vector<ScalarField> components_;
  std::array<double, kMaxDim> constant_{};
};

// -- differential operators ------------------------------------------------

ScalarField laplacian(const ScalarField& u);
ScalarField drift_term(const ScalarField& u, const DriftForm& theta);
/// L u = laplacian(u) - drift_term(u, theta).
ScalarField apply_L(const ScalarField& u, const DriftForm& theta);
/// Central-difference divergence of a drift form.
ScalarField divergence(const DriftForm& theta);
double max_abs_divergence(const DriftForm& theta);
/// True when every component is below tol in magnitude.
bool drift_is_negligible(const DriftForm& theta, double tol = defaults::zero_tol);

// -- integration and norms ---------------------------------------------------

/// node_weight * sum of values; equals the mean since Vol = 1.
double integrate(const ScalarField& f);
double mean(const ScalarField& f);
/// Integral of the pointwise product.
double inner(const ScalarField& f, const ScalarField& g);
/// (Integral of |f|^p)^(1/p); p = infinity gives max|f|. Requires p >= 1.
double lp_norm(const ScalarField& f, double p);

// -- small field algebra helpers ---------------------------------------------

void require_same_grid(const ScalarField& a, const ScalarField& b);
void require_same_grid(const ScalarField& a, const DriftForm& theta);

template <class F>
ScalarField map_field(const ScalarField& u, F&& fn) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = fn(u[i]);
  return ScalarField::from_values_unchecked(u.grid(), std::move(out));
}

template <class F>
ScalarField zip_fields(const ScalarField& a, const ScalarField& b, F&& fn) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i], b[i]);
  return ScalarField::from_values_unchecked(a.grid(), std::move(out));
}

ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
/// a + c*b.
ScalarField add_scaled(const ScalarField& a, double c, const ScalarField& b);
ScalarField scale(const ScalarField& a, double c);
ScalarField add_constant(const ScalarField& a, double c);
double max_abs_diff(const ScalarField& a, const ScalarField& b);

/// Visits every node of one axis pass: fn(node, node_plus, node_minus) with
/// periodic wrap along `axis`.
template <class F>
void axis_pass(const Grid& g, int axis, F&& fn) {
  const std::size_t s = g.stride(axis);
  const std::size_t n = static_cast<std::size_t>(g.points(axis));
  const std::size_t block = s * n;
  const std::size_t outer = g.node_count() / block;
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * block;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
      const std::size_t jm = (j == 0) ? n - 1 : j - 1;
      const std::size_t row = base + j * s;
      const std::size_t rowp = base + jp * s;
      const std::size_t rowm = base + jm * s;
      for (std::size_t i = 0; i < s; ++i) fn(row + i, rowp + i, rowm + i);
    }
  }
}

}  // namespace kw
