#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "field_io.hpp"
#include "linsolve.hpp"
#include "manifold.hpp"
#include "test_support.hpp"

using namespace kw;
using namespace kwtest;

TEST_CASE("grid construction and quadrature weights") {
  auto g1 = grid1d(8);
  CHECK(g1->node_count() == 8);
  CHECK(g1->node_weight() == doctest::Approx(0.125).epsilon(1e-15));

  auto g2 = grid2d(16, 16);
  CHECK(g2->node_count() == 256);
  CHECK(g2->node_weight() == doctest::Approx(1.0 / 256).epsilon(1e-15));

  // Unequal periods are fine as long as the volume stays 1.
  auto g3 = grid2d(16, 8, 2.0, 0.5);
  CHECK(std::abs(g3->node_weight() * static_cast<double>(g3->node_count()) - 1.0) <=
        1e-14);
  CHECK(g3->spacing(0) == doctest::Approx(0.125));

  // Node coordinates are j_i * h_i.
  CHECK(g2->coord(0, 0) == 0.0);
  CHECK(g2->coord(17, 0) == doctest::Approx(1.0 / 16));
  CHECK(g2->coord(17, 1) == doctest::Approx(1.0 / 16));
}

TEST_CASE("grid invariant violations are rejected") {
  GridSpec bad_volume;
  bad_volume.dim = 2;
  bad_volume.points = {16, 16, 0};
  bad_volume.periods = {2.0, 1.0, 0.0};
  CHECK_THROWS_AS(build_grid(bad_volume), Error);

  GridSpec too_few;
  too_few.dim = 1;
  too_few.points[0] = 3;
  too_few.periods[0] = 1.0;
  CHECK_THROWS_AS(build_grid(too_few), Error);
}

TEST_CASE("laplacian: constants, Fourier modes, zero mean") {
  auto g = grid1d(64);

  SUBCASE("constants are harmonic") {
    const ScalarField c = ScalarField::constant(g, 3.7);
    CHECK(laplacian(c).max_abs() <= 1e-12);
  }

  SUBCASE("sin(2 pi x) is an eigenfunction of the stencil") {
    const ScalarField u = ScalarField::sample(
        g, [](const auto& x) { return std::sin(2 * kPi * x[0]); });
    const ScalarField lu = laplacian(u);
    // Exact discrete eigenvalue 4 sin^2(pi/N) / h^2, approaching 4 pi^2.
    const double h = g->spacing(0);
    const double lambda = 4.0 * std::pow(std::sin(kPi / 64), 2) / (h * h);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      worst = std::max(worst, std::abs(lu[i] + lambda * u[i]));
    CHECK(worst <= 1e-10);
    CHECK(lambda == doctest::Approx(4 * kPi * kPi).epsilon(1e-3));
  }

  SUBCASE("discrete divergence theorem") {
    const ScalarField u = random_field(g, 11);
    CHECK(std::abs(integrate(laplacian(u))) <= 1e-12);
  }
}

TEST_CASE("laplacian consistency is second order") {
  // Halving h cuts the sup error against -4 pi^2 k^2 sin by 4 (within 15%).
  const int k = 2;
  auto error_at = [&](int n) {
    auto g = grid1d(n);
    const ScalarField u = ScalarField::sample(
        g, [&](const auto& x) { return std::sin(2 * kPi * k * x[0]); });
    const ScalarField lu = laplacian(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      worst = std::max(worst,
                       std::abs(lu[i] + 4 * kPi * kPi * k * k * u[i]));
    return worst;
  };
  const double ratio = error_at(32) / error_at(64);
  CHECK(ratio > 4.0 * 0.85);
  CHECK(ratio < 4.0 * 1.15);
}

TEST_CASE("laplacian self-adjointness") {
  auto g = grid2d(16, 12);
  const ScalarField u = random_field(g, 3);
  const ScalarField v = random_field(g, 4);
  CHECK(std::abs(inner(laplacian(u), v) - inner(u, laplacian(v))) <= 1e-12);
}

TEST_CASE("drift term: directional derivative and annihilation") {
  auto g = grid2d(32, 32);

  SUBCASE("zero drift gives the zero field") {
    const ScalarField u = random_field(g, 5);
    CHECK(drift_term(u, DriftForm::zero(g)).max_abs() == 0.0);
  }

  SUBCASE("constant drift is a directional derivative") {
    const double comps[2] = {1.0, 0.0};
    const DriftForm theta = DriftForm::constant(g, comps);
    const ScalarField u = ScalarField::sample(
        g, [](const auto& x) { return std::sin(2 * kPi * x[0]); });
    const ScalarField du = drift_term(u, theta);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double expected = 2 * kPi * std::cos(2 * kPi * g->coord(i, 0));
      worst = std::max(worst, std::abs(du[i] - expected));
    }
    CHECK(worst <= 4 * kPi * kPi * kPi / (32.0 * 32.0));  // O(h^2)
  }

  SUBCASE("integrals of <dF(u), theta> vanish for co-closed theta") {
    const ScalarField u = random_field(g, 6);
    const double comps[2] = {0.7, -0.4};
    const DriftForm constant = DriftForm::constant(g, comps);
    const ScalarField psi = ScalarField::sample(g, [](const auto& x) {
      return std::sin(2 * kPi * x[0]) * std::cos(4 * kPi * x[1]) +
             0.5 * std::cos(2 * kPi * x[1]);
    });
    const DriftForm stream = DriftForm::stream2d(psi);
    for (const DriftForm* theta : {&constant, &stream}) {
      CHECK(std::abs(integrate(drift_term(u, *theta))) <= 1e-10);
      const ScalarField u2 = map_field(u, [](double x) { return x * x; });
      CHECK(std::abs(integrate(drift_term(u2, *theta))) <= 1e-10);
      const ScalarField eu = map_field(u, [](double x) { return std::exp(x); });
      CHECK(std::abs(integrate(drift_term(eu, *theta))) <= 1e-10);
    }
  }
}

TEST_CASE("apply_L combines the stencils and integrates to zero") {
  auto g = grid2d(32, 32);
  const double eps = 0.25;
  const double comps[2] = {eps, 0.0};
  const DriftForm theta = DriftForm::constant(g, comps);

  SUBCASE("constants are in the kernel") {
    CHECK(apply_L(ScalarField::constant(g, -2.5), theta).max_abs() <= 1e-12);
  }

  SUBCASE("theta = 0 reduces to the laplacian") {
    const ScalarField u = random_field(g, 7);
    CHECK(max_abs_diff(apply_L(u, DriftForm::zero(g)), laplacian(u)) == 0.0);
  }

  SUBCASE("linearity against the closed form") {
    const ScalarField u = ScalarField::sample(
        g, [](const auto& x) { return std::sin(2 * kPi * x[0]); });
    const ScalarField lu = apply_L(u, theta);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = g->coord(i, 0);
      const double expected = -4 * kPi * kPi * std::sin(2 * kPi * x) -
                              2 * kPi * eps * std::cos(2 * kPi * x);
      worst = std::max(worst, std::abs(lu[i] - expected));
    }
    CHECK(worst <= 0.2);  // O(h^2) at N=32
  }

  SUBCASE("range is mean-zero") {
    const ScalarField u = random_field(g, 8);
    CHECK(std::abs(integrate(apply_L(u, theta))) <= 1e-12);
  }
}

TEST_CASE("divergence of drift forms") {
  auto g = grid2d(32, 32);

  const double comps[2] = {0.3, -0.2};
  CHECK(max_abs_divergence(DriftForm::constant(g, comps)) == 0.0);

  const ScalarField psi = ScalarField::sample(g, [](const auto& x) {
    return std::cos(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]);
  });
  CHECK(max_abs_divergence(DriftForm::stream2d(psi)) <= 1e-12);

  // theta = (sin(2 pi x), 0) is not co-closed; div = 2 pi cos(2 pi x) + O(h^2).
  std::vector<ScalarField> bad;
  bad.push_back(ScalarField::sample(
      g, [](const auto& x) { return std::sin(2 * kPi * x[0]); }));
  bad.push_back(ScalarField::zeros(g));
  const DriftForm theta = DriftForm::from_components(std::move(bad));
  CHECK(max_abs_divergence(theta) > 1.0);
  CHECK(max_abs_divergence(theta) == doctest::Approx(2 * kPi).epsilon(1e-2));
}

TEST_CASE("integration on the unit-volume torus") {
  auto g = grid1d(64);
  CHECK(integrate(ScalarField::constant(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  const ScalarField s = ScalarField::sample(
      g, [](const auto& x) { return std::sin(2 * kPi * x[0]); });
  CHECK(std::abs(integrate(s)) <= 1e-14);
  CHECK(integrate(add_constant(s, 2.0)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("lp norms") {
  auto g = grid1d(64);
  const ScalarField two = ScalarField::constant(g, 2.0);
  CHECK(lp_norm(two, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lp_norm(two, std::numeric_limits<double>::infinity()) == 2.0);

  const ScalarField s = ScalarField::sample(
      g, [](const auto& x) { return std::sin(2 * kPi * x[0]); });
  CHECK(std::abs(lp_norm(s, 2.0) - 1.0 / std::sqrt(2.0)) <= 1e-3);

  // Nondecreasing in p on a unit-volume space.
  const ScalarField u = random_field(g, 9);
  double prev = lp_norm(u, 1.0);
  for (double p : {2.0, 4.0, 8.0, 16.0}) {
    const double cur = lp_norm(u, p);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
  CHECK(u.max_abs() >= prev - 1e-12);

  CHECK_THROWS_AS(lp_norm(u, 0.5), Error);
}

TEST_CASE("solve_linear_L inverts the stencil") {
  auto g = grid1d(64);
  const DriftForm zero = DriftForm::zero(g);

  SUBCASE("zero right-hand side") {
    CHECK(solve_linear_L(ScalarField::zeros(g), zero).max_abs() <= 1e-14);
  }

  SUBCASE("Fourier inversion of the stencil symbol") {
    const ScalarField f = ScalarField::sample(
        g, [](const auto& x) { return std::sin(2 * kPi * x[0]); });
    const ScalarField u = solve_linear_L(f, zero);
    const double h = g->spacing(0);
    const double lambda = 4.0 * std::pow(std::sin(kPi / 64), 2) / (h * h);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      worst = std::max(worst, std::abs(u[i] + f[i] / lambda));
    CHECK(worst <= 1e-12);
    CHECK(std::abs(lambda - 4 * kPi * kPi) / (4 * kPi * kPi) < 3e-3);
  }

  SUBCASE("incompatible right-hand side is rejected") {
    CHECK_THROWS_AS(solve_linear_L(ScalarField::constant(g, 1.0), zero), Error);
    try {
      solve_linear_L(ScalarField::constant(g, 1.0), zero);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::incompatible_rhs);
    }
  }
}

TEST_CASE("solve_linear_L round-trips through apply_L") {
  auto g = grid2d(24, 24);
  ScalarField f = random_field(g, 10);
  f = add_constant(f, -mean(f));

  SUBCASE("constant drift (spectral path)") {
    const double comps[2] = {0.5, -0.3};
    const DriftForm theta = DriftForm::constant(g, comps);
    const ScalarField u = solve_linear_L(f, theta, 1e-12);
    CHECK(max_abs_diff(apply_L(u, theta), f) <= 1e-11);
    CHECK(std::abs(mean(u)) <= 1e-13);
  }

  SUBCASE("stream-function drift (Krylov path)") {
    const ScalarField psi = ScalarField::sample(g, [](const auto& x) {
      return 0.4 * std::sin(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]);
    });
    const DriftForm theta = DriftForm::stream2d(psi);
    const ScalarField u = solve_linear_L(f, theta, 1e-11);
    CHECK(max_abs_diff(apply_L(u, theta), f) <= 1e-11);
    CHECK(std::abs(mean(u)) <= 1e-13);
  }
}

TEST_CASE("solve_linear_L in 3D") {
  auto g = grid3d(8);
  ScalarField f = random_field(g, 12);
  f = add_constant(f, -mean(f));
  const ScalarField u = solve_linear_L(f, DriftForm::zero(g));
  CHECK(max_abs_diff(apply_L(u, DriftForm::zero(g)), f) <= 1e-11);
}

TEST_CASE("field dump round trip") {
  namespace fs = std::filesystem;
  auto g = grid2d(12, 8, 2.0, 0.5);
  const ScalarField u = random_field(g, 13);
  const std::string path =
      (fs::temp_directory_path() / "kw_test_field_dump.txt").string();
  write_field(u, path);
  const ScalarField back = read_field(path);
  REQUIRE(back.grid()->same_as(*g));
  CHECK(max_abs_diff(back, u) == 0.0);  // 17 digits round-trip exactly
  fs::remove(path);

  CHECK_THROWS_AS(read_field("/nonexistent/kw_field.txt"), Error);
}

TEST_CASE("grid mismatch is diagnosed") {
  auto a = grid1d(8);
  auto b = grid1d(16);
  const ScalarField u = ScalarField::zeros(a);
  const ScalarField v = ScalarField::zeros(b);
  CHECK_THROWS_AS(add(u, v), Error);
  CHECK_THROWS_AS(drift_term(u, DriftForm::zero(b)), Error);
}

TEST_CASE("translation equivariance of the stencils") {
  auto g = grid2d(16, 16);
  const ScalarField u = random_field(g, 14);
  const ScalarField rolled = roll(u, 0, 5);
  CHECK(max_abs_diff(laplacian(rolled), roll(laplacian(u), 0, 5)) <= 1e-12);
}
