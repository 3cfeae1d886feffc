#pragma once

/// Fourier-diagonal solves for constant-coefficient operators on the periodic
/// grid. The symbols used are those of the *discrete* central stencils, so a
/// spectral solve inverts the finite-difference operator exactly (up to
/// rounding), not its continuum limit.

#include <array>
#include <vector>

#include "manifold.hpp"

struct fftw_plan_s;

namespace kw {

class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(GridPtr grid);
  ~SpectralWorkspace();

  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const GridPtr& grid() const { return grid_; }

  /// Solves (a*I + b*L_theta) u = f where L_theta = Laplacian - <d., theta>
  /// for a constant drift theta (pass nullptr for theta = 0). The zero
  /// Fourier mode is divided by `a` when a != 0 and projected out otherwise,
  /// in which case f must be mean-zero for the result to solve the system.
  ScalarField solve(const ScalarField& f, double a, double b,
                    const double* theta_constant);

 private:
  GridPtr grid_;
  double* real_ = nullptr;
  void* cplx_ = nullptr;  // fftw_complex*
  fftw_plan_s* fwd_ = nullptr;
  fftw_plan_s* bwd_ = nullptr;
  std::size_t cplx_count_ = 0;
  // Per-axis discrete symbols: lam[a][k] = 4 sin^2(pi k / N) / h^2 (Laplacian),
  // omg[a][k] = sin(2 pi k / N) / h (central first derivative, imaginary part).
  std::array<std::vector<double>, kMaxDim> lam_;
  std::array<std::vector<double>, kMaxDim> omg_;
};

}  // namespace kw
