#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

namespace kw {

SpectralWorkspace::SpectralWorkspace(GridPtr grid) : grid_(std::move(grid)) {
  const int dim = grid_->dim();
  std::array<int, kMaxDim> n{};
  for (int a = 0; a < dim; ++a) n[static_cast<size_t>(a)] = grid_->points(a);

  cplx_count_ = 1;
  for (int a = 0; a < dim - 1; ++a) cplx_count_ *= static_cast<std::size_t>(n[static_cast<size_t>(a)]);
  cplx_count_ *= static_cast<std::size_t>(n[static_cast<size_t>(dim - 1)] / 2 + 1);

  real_ = fftw_alloc_real(grid_->node_count());
  cplx_ = fftw_alloc_complex(cplx_count_);
  // FFTW_ESTIMATE keeps planning deterministic and cheap at these sizes.
  fwd_ = fftw_plan_dft_r2c(dim, n.data(), real_,
                           static_cast<fftw_complex*>(cplx_), FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r(dim, n.data(), static_cast<fftw_complex*>(cplx_),
                           real_, FFTW_ESTIMATE);
  if (fwd_ == nullptr || bwd_ == nullptr)
    fail(ErrorCode::internal, "FFTW plan creation failed");

  for (int a = 0; a < dim; ++a) {
    const auto ia = static_cast<size_t>(a);
    const int na = n[ia];
    const double h = grid_->spacing(a);
    lam_[ia].resize(static_cast<size_t>(na));
    omg_[ia].resize(static_cast<size_t>(na));
    for (int k = 0; k < na; ++k) {
      const double s = std::sin(std::numbers::pi * k / na);
      lam_[ia][static_cast<size_t>(k)] = 4.0 * s * s / (h * h);
      omg_[ia][static_cast<size_t>(k)] = std::sin(2.0 * std::numbers::pi * k / na) / h;
    }
  }
}

SpectralWorkspace::~SpectralWorkspace() {
  if (fwd_ != nullptr) fftw_destroy_plan(fwd_);
  if (bwd_ != nullptr) fftw_destroy_plan(bwd_);
  if (real_ != nullptr) fftw_free(real_);
  if (cplx_ != nullptr) fftw_free(static_cast<fftw_complex*>(cplx_));
}

ScalarField SpectralWorkspace::solve(const ScalarField& f, double a, double b,
                                     const double* theta_constant) {
  if (!f.grid()->same_as(*grid_))
    fail(ErrorCode::grid_mismatch, "field does not match the spectral workspace grid");
  const int dim = grid_->dim();
  std::array<int, kMaxDim> n{};
  for (int ax = 0; ax < dim; ++ax) n[static_cast<size_t>(ax)] = grid_->points(ax);
  const int nlast = n[static_cast<size_t>(dim - 1)] / 2 + 1;

  for (std::size_t i = 0; i < f.size(); ++i) real_[i] = f[i];
  fftw_execute(fwd_);

  auto* c = static_cast<fftw_complex*>(cplx_);
  std::array<int, kMaxDim> k{};
  for (std::size_t idx = 0; idx < cplx_count_; ++idx) {
    // Decompose the packed index (last axis truncated to N/2+1).
    std::size_t rest = idx;
    k[static_cast<size_t>(dim - 1)] = static_cast<int>(rest % static_cast<std::size_t>(nlast));
    rest /= static_cast<std::size_t>(nlast);
    for (int ax = dim - 2; ax >= 0; --ax) {
      k[static_cast<size_t>(ax)] = static_cast<int>(rest % static_cast<std::size_t>(n[static_cast<size_t>(ax)]));
      rest /= static_cast<std::size_t>(n[static_cast<size_t>(ax)]);
    }
    double mu = 0.0;   // Laplacian symbol (negative semidefinite)
    double omega = 0.0;  // drift symbol (odd, imaginary)
    bool zero_mode = true;
    for (int ax = 0; ax < dim; ++ax) {
      const auto ia = static_cast<size_t>(ax);
      const auto ik = static_cast<size_t>(k[ia]);
      mu -= lam_[ia][ik];
      if (theta_constant != nullptr) omega += theta_constant[ia] * omg_[ia][ik];
      if (k[ia] != 0) zero_mode = false;
    }
    // Symbol of a*I + b*(Laplacian - <d., theta>): a + b*mu - i*b*omega.
    const double dr = a + b * mu;
    const double di = -b * omega;
    if (zero_mode && a == 0.0) {
      c[idx][0] = 0.0;
      c[idx][1] = 0.0;
      continue;
    }
    const double den = dr * dr + di * di;
    if (den == 0.0) fail(ErrorCode::internal, "singular spectral symbol");
    const double re = c[idx][0], im = c[idx][1];
    c[idx][0] = (re * dr + im * di) / den;
    c[idx][1] = (im * dr - re * di) / den;
  }

  fftw_execute(bwd_);
  const double norm = 1.0 / static_cast<double>(grid_->node_count());
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_[i] * norm;
  return ScalarField::from_values_unchecked(f.grid(), std::move(out));
}

}  // namespace kw
