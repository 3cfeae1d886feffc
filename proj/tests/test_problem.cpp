#include <doctest.h>

#include <cmath>

#include "problem.hpp"
#include "test_support.hpp"

using namespace kw;
using namespace kwtest;

namespace {

ProblemData constant_problem(GridPtr g, double s, double a, double b,
                             double alpha = 1.0, double beta = 1.0) {
  return ProblemData::create(ScalarField::constant(g, s),
                             ScalarField::constant(g, a),
                             ScalarField::constant(g, b), alpha, beta,
                             DriftForm::zero(g));
}

}  // namespace

TEST_CASE("hypothesis validation: weak and strict modes") {
  auto g = grid1d(32);

  SUBCASE("constant valid problem passes weak") {
    const auto p = constant_problem(g, -1.0, 1.0, 0.0);
    const HypothesisReport r = validate(p, HypothesisMode::weak);
    CHECK(r.passed);
    CHECK(r.s_mean == doctest::Approx(-1.0));
    CHECK(r.a_min == 1.0);
  }

  SUBCASE("A identically zero fails") {
    const auto p = constant_problem(g, -1.0, 0.0, 1.0);
    const HypothesisReport r = validate(p, HypothesisMode::weak);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.a_not_identically_zero);
  }

  SUBCASE("A = max(0, sin) passes weak but not strict") {
    const ScalarField a = ScalarField::sample(g, [](const auto& x) {
      return std::max(0.0, std::sin(2 * kPi * x[0]));
    });
    const auto p = ProblemData::create(
        ScalarField::constant(g, -1.0), a, ScalarField::zeros(g), 1.0, 1.0,
        DriftForm::zero(g));
    CHECK(validate(p, HypothesisMode::weak).passed);
    const HypothesisReport strict = validate(p, HypothesisMode::strict);
    CHECK_FALSE(strict.passed);
    CHECK_FALSE(strict.a_strictly_positive);
    CHECK(strict.a_min == 0.0);
  }

  SUBCASE("nonnegative mean of S fails") {
    const auto p = constant_problem(g, 0.5, 1.0, 0.0);
    CHECK_FALSE(validate(p, HypothesisMode::weak).passed);
  }

  SUBCASE("negative B fails") {
    const auto p = constant_problem(g, -1.0, 1.0, -0.25);
    const HypothesisReport r = validate(p, HypothesisMode::weak);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.b_nonnegative);
  }

  SUBCASE("non-co-closed theta fails") {
    auto g2 = grid2d(16, 16);
    std::vector<ScalarField> comps;
    comps.push_back(ScalarField::sample(
        g2, [](const auto& x) { return std::sin(2 * kPi * x[0]); }));
    comps.push_back(ScalarField::zeros(g2));
    const auto p = ProblemData::create(
        ScalarField::constant(g2, -1.0), ScalarField::constant(g2, 1.0),
        ScalarField::zeros(g2), 1.0, 1.0,
        DriftForm::from_components(std::move(comps)));
    const HypothesisReport r = validate(p, HypothesisMode::weak);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.theta_coclosed);
    CHECK(r.theta_max_divergence > 1.0);
  }

  SUBCASE("strict pass implies weak pass") {
    const auto p = constant_problem(g, -2.0, 0.5, 0.3, 1.5, 0.7);
    if (validate(p, HypothesisMode::strict).passed)
      CHECK(validate(p, HypothesisMode::weak).passed);
  }
}

TEST_CASE("problem construction rejects bad exponents") {
  auto g = grid1d(8);
  CHECK_THROWS_AS(constant_problem(g, -1.0, 1.0, 0.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(constant_problem(g, -1.0, 1.0, 0.0, 1.0, -2.0), Error);
}

TEST_CASE("residual closed forms") {
  auto g = grid2d(16, 16);

  SUBCASE("u = 0 solves S = -1, A = 1, B = 0") {
    const auto p = constant_problem(g, -1.0, 1.0, 0.0);
    CHECK(residual(p, ScalarField::zeros(g)).max_abs() == 0.0);
  }

  SUBCASE("u = 1 solves S = -e, A = 1, B = 0") {
    const auto p = constant_problem(g, -std::exp(1.0), 1.0, 0.0);
    CHECK(residual(p, ScalarField::constant(g, 1.0)).max_abs() <= 1e-14);
  }

  SUBCASE("golden-ratio root of x - 1/x = 1") {
    const auto p = constant_problem(g, -1.0, 1.0, 1.0);
    const double root = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    CHECK(residual(p, ScalarField::constant(g, root)).max_abs() <= 1e-12);
  }
}

TEST_CASE("residual overflow guard") {
  auto g = grid1d(8);
  const auto p = constant_problem(g, -1.0, 1.0, 0.0);
  CHECK_THROWS_AS(residual(p, ScalarField::constant(g, 800.0)), Error);
  try {
    residual(p, ScalarField::constant(g, 800.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::overflow);
  }
  // beta * max(-u) is guarded as well.
  CHECK_THROWS_AS(residual(p, ScalarField::constant(g, -800.0)), Error);
}

TEST_CASE("reaction slope is the u-derivative of the reaction") {
  auto g = grid1d(16);
  const auto p = constant_problem(g, -1.0, 2.0, 0.5, 1.5, 0.7);
  const ScalarField u = random_field(g, 21, -0.5, 0.5);
  const ScalarField slope = reaction_slope(p, u);
  // Finite-difference oracle in u.
  const double eps = 1e-6;
  const ScalarField rp = residual(p, add_constant(u, eps));
  const ScalarField rm = residual(p, add_constant(u, -eps));
  for (std::size_t i = 0; i < u.size(); i += 3) {
    const double fd = -(rp[i] - rm[i]) / (2 * eps);
    CHECK(slope[i] == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("manufactured problems") {
  SUBCASE("constant u_star gives constant S") {
    auto g = grid1d(16);
    const auto p0 = manufacture(ScalarField::zeros(g), ScalarField::constant(g, 1.0),
                                ScalarField::zeros(g), 1.0, 1.0, DriftForm::zero(g));
    CHECK(max_abs_diff(p0.S, ScalarField::constant(g, -1.0)) == 0.0);
    CHECK(integrate(p0.S) == doctest::Approx(-1.0));

    const auto p1 = manufacture(ScalarField::constant(g, 1.0),
                                ScalarField::constant(g, 1.0), ScalarField::zeros(g),
                                1.0, 1.0, DriftForm::zero(g));
    CHECK(max_abs_diff(p1.S, ScalarField::constant(g, -std::exp(1.0))) <= 1e-14);
  }

  SUBCASE("2D data from the residual definition") {
    auto g = grid2d(24, 24);
    const ScalarField u_star = ScalarField::sample(g, [](const auto& x) {
      return 0.5 * std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]);
    });
    const ScalarField A = ScalarField::sample(
        g, [](const auto& x) { return 2.0 + std::cos(2 * kPi * x[0]); });
    const ScalarField B = ScalarField::sample(
        g, [](const auto& x) { return 1.0 + 0.5 * std::sin(2 * kPi * x[1]); });
    const double comps[2] = {0.3, -0.2};
    const auto p = manufacture(u_star, A, B, 1.5, 0.7,
                               DriftForm::constant(g, comps));
    CHECK(integrate(p.S) < 0.0);
    // Exact by construction, only rounding.
    CHECK(residual(p, u_star).max_abs() <= 1e-12);
    CHECK(validate(p, HypothesisMode::strict).passed);
  }

  SUBCASE("nonnegative mean of S is refused with guidance") {
    auto g = grid1d(16);
    CHECK_THROWS_WITH_AS(
        manufacture(ScalarField::zeros(g), ScalarField::zeros(g),
                    ScalarField::constant(g, 1.0), 1.0, 1.0, DriftForm::zero(g)),
        doctest::Contains("rescale u_star or enlarge A"), Error);
  }
}

TEST_CASE("residual is translation equivariant") {
  auto g = grid2d(16, 16);
  const ScalarField u = random_field(g, 22, -0.4, 0.4);
  const ScalarField S = random_field(g, 23, -2.0, -1.0);
  const ScalarField A = random_field(g, 24, 0.5, 1.5);
  const ScalarField B = random_field(g, 25, 0.0, 1.0);
  const auto p = ProblemData::create(S, A, B, 1.2, 0.8, DriftForm::zero(g));

  const int shift = 7;
  const auto p_shifted = ProblemData::create(
      roll(S, 0, shift), roll(A, 0, shift), roll(B, 0, shift), 1.2, 0.8,
      DriftForm::zero(g));
  CHECK(max_abs_diff(residual(p_shifted, roll(u, 0, shift)),
                     roll(residual(p, u), 0, shift)) <= 1e-12);
}
