#include <doctest.h>

#include <cmath>
#include <sstream>

#include "flow.hpp"
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

const double kGolden = std::log((1.0 + std::sqrt(5.0)) / 2.0);

}  // namespace

TEST_CASE("flow_step fixed points and the constant reduction") {
  auto g = grid2d(16, 16);
  const auto p = constant_problem(g, -std::exp(1.0), 1.0, 0.0);
  const ScalarField one = ScalarField::constant(g, 1.0);

  SUBCASE("stationary states do not move") {
    CHECK(max_abs_diff(flow_step(one, p, 1e-4, Scheme::explicit_euler), one) <= 1e-14);
    CHECK(max_abs_diff(flow_step(one, p, 0.05, Scheme::imex), one) <= 1e-12);
  }

  SUBCASE("spatially constant explicit step matches the scalar ODE step") {
    const double c = 0.3;
    const double dt = 1e-4;
    const ScalarField u = ScalarField::constant(g, c);
    const ScalarField next = flow_step(u, p, dt, Scheme::explicit_euler);
    const double expected = c + dt * (std::exp(1.0) - std::exp(c));
    CHECK(max_abs_diff(next, ScalarField::constant(g, expected)) <= 1e-14);
  }

  SUBCASE("one IMEX step from a constant equals the explicit step") {
    const double c = -0.4;
    const double dt = 1e-4;
    const ScalarField u = ScalarField::constant(g, c);
    const ScalarField imex = flow_step(u, p, dt, Scheme::imex);
    const ScalarField expl = flow_step(u, p, dt, Scheme::explicit_euler);
    CHECK(max_abs_diff(imex, expl) <= 1e-13);
  }

  SUBCASE("explicit scheme enforces the CFL bound") {
    const double bound = explicit_stability_dt(*g);
    CHECK_THROWS_AS(flow_step(one, p, 2.0 * bound, Scheme::explicit_euler), Error);
  }
}

TEST_CASE("run_flow reaches the constant exact solutions") {
  auto g = grid2d(32, 32);
  FlowConfig config;
  config.residual_tol = 1e-8;
  config.max_time = 50.0;

  SUBCASE("u = 1 for S = -e") {
    const auto p = constant_problem(g, -std::exp(1.0), 1.0, 0.0);
    const FlowResult r = run_flow(ScalarField::zeros(g), p, config);
    REQUIRE(r.converged);
    CHECK(max_abs_diff(r.u, ScalarField::constant(g, 1.0)) <= 1e-6);
    CHECK(r.trace.sup_ut_monotone());
    CHECK(r.trace.has_energy());
    CHECK(r.trace.energy_monotone());
  }

  SUBCASE("golden ratio for S = -1, A = B = 1") {
    const auto p = constant_problem(g, -1.0, 1.0, 1.0);
    const FlowResult r = run_flow(ScalarField::zeros(g), p, config);
    REQUIRE(r.converged);
    CHECK(max_abs_diff(r.u, ScalarField::constant(g, kGolden)) <= 1e-6);
  }

  SUBCASE("uniqueness: two starts agree") {
    const auto p = constant_problem(g, -1.0, 1.0, 1.0);
    const FlowResult a = run_flow(ScalarField::zeros(g), p, config);
    const ScalarField u0 = ScalarField::sample(
        g, [](const auto& x) { return 3.0 * std::sin(2 * kPi * x[0]); });
    const FlowResult b = run_flow(u0, p, config);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(max_abs_diff(a.u, b.u) <= 1e-6);
    CHECK(b.trace.sup_ut_monotone());
    CHECK(b.trace.energy_monotone());
  }
}

TEST_CASE("run_flow diagnoses non-convergence and bad data") {
  auto g = grid1d(32);
  const auto p = constant_problem(g, -std::exp(1.0), 1.0, 0.0);

  SUBCASE("max_time reached leaves a partial trace") {
    FlowConfig config;
    config.residual_tol = 1e-12;
    config.max_time = 0.05;
    config.dt = 0.01;
    const FlowResult r = run_flow(ScalarField::zeros(g), p, config);
    CHECK_FALSE(r.converged);
    CHECK(r.trace.times.size() >= 2);
    CHECK(r.final_residual > 1e-12);
  }

  SUBCASE("weak hypotheses are required") {
    const auto bad = constant_problem(g, 1.0, 1.0, 0.0);
    FlowConfig config;
    CHECK_THROWS_AS(run_flow(ScalarField::zeros(g), bad, config), Error);
  }

  SUBCASE("explicit dt above the stability bound is rejected") {
    FlowConfig config;
    config.scheme = Scheme::explicit_euler;
    config.dt = 10.0 * explicit_stability_dt(*g);
    CHECK_THROWS_AS(run_flow(ScalarField::zeros(g), p, config), Error);
  }
}

TEST_CASE("trace times strictly increase") {
  auto g = grid1d(32);
  const auto p = constant_problem(g, -1.0, 1.0, 1.0);
  FlowConfig config;
  config.trace_stride = 3;
  const FlowResult r = run_flow(ScalarField::zeros(g), p, config);
  REQUIRE(r.converged);
  for (std::size_t i = 1; i < r.trace.times.size(); ++i)
    CHECK(r.trace.times[i] > r.trace.times[i - 1]);
}

TEST_CASE("energy functional closed forms and dissipation") {
  auto g = grid2d(16, 16);

  SUBCASE("closed forms") {
    const auto p1 = constant_problem(g, -1.0, 1.0, 0.0);
    CHECK(energy(p1, ScalarField::zeros(g)) == doctest::Approx(1.0).epsilon(1e-14));
    const auto p2 = constant_problem(g, -std::exp(1.0), 1.0, 0.0);
    CHECK(std::abs(energy(p2, ScalarField::constant(g, 1.0))) <= 1e-12);
  }

  SUBCASE("rejected for theta != 0") {
    const double comps[2] = {0.1, 0.0};
    const auto p = ProblemData::create(
        ScalarField::constant(g, -1.0), ScalarField::constant(g, 1.0),
        ScalarField::zeros(g), 1.0, 1.0, DriftForm::constant(g, comps));
    CHECK_THROWS_AS(energy(p, ScalarField::zeros(g)), Error);
  }

  SUBCASE("dissipation along a non-constant flow") {
    const ScalarField S = ScalarField::sample(g, [](const auto& x) {
      return -2.0 + 0.5 * std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]);
    });
    const auto p = ProblemData::create(S, ScalarField::constant(g, 1.0),
                                       ScalarField::constant(g, 0.5), 1.0, 1.0,
                                       DriftForm::zero(g));
    FlowConfig config;
    config.trace_stride = 5;
    const FlowResult r = run_flow(ScalarField::zeros(g), p, config);
    REQUIRE(r.converged);
    CHECK(r.trace.energy_monotone());
    CHECK(r.trace.sup_ut_monotone());
  }
}

TEST_CASE("flow against the scalar comparison ODE") {
  // For spatially constant data the flow solves du/dt = -S - A e^u exactly
  // in space; explicit Euler tracks the ODE to O(dt).
  auto g = grid1d(8);
  const auto p = constant_problem(g, -std::exp(1.0), 1.0, 0.0);
  const double dt = 1e-3;
  FlowConfig config;
  config.scheme = Scheme::explicit_euler;
  config.dt = dt;
  config.max_time = 1.0;
  config.residual_tol = 1e-14;  // never reached; run to max_time
  config.trace_stride = 100;
  config.record_snapshots = true;
  const FlowResult r = run_flow(ScalarField::zeros(g), p, config);

  const OdeSamples ode = comparison_ode_solve(
      [](double phi, double) { return std::exp(1.0) - std::exp(phi); }, 0.0, 1.0,
      dt);
  for (const auto& [t, u] : r.snapshots) {
    const std::size_t k = static_cast<std::size_t>(std::lround(t / dt));
    REQUIRE(k < ode.phi.size());
    CHECK(std::abs(u[0] - ode.phi[k]) <= 10.0 * dt);
  }
}

TEST_CASE("comparison_ode_solve basics") {
  SUBCASE("zero field stays at c0") {
    const OdeSamples s =
        comparison_ode_solve([](double, double) { return 0.0; }, 2.5, 1.0, 0.1);
    CHECK(s.phi.front() == 2.5);
    CHECK(s.phi.back() == 2.5);
  }

  SUBCASE("linear decay hits e^{-1}") {
    const OdeSamples s =
        comparison_ode_solve([](double phi, double) { return -phi; }, 1.0, 1.0,
                             1e-3);
    CHECK(std::abs(s.phi.back() - std::exp(-1.0)) <= 1e-10);
  }

  SUBCASE("blow-up is detected") {
    CHECK_THROWS_AS(comparison_ode_solve(
                        [](double phi, double) { return 100.0 * phi; }, 1.0, 1.0,
                        1e-3),
                    Error);
  }
}

TEST_CASE("barrier_phi closed form") {
  BarrierData data;
  data.s_bar = -1.0;
  data.sup_w = 0.0;
  data.c0 = 1.0;

  SUBCASE("phi(t) = ln((e-1)e^{-t} + 1)") {
    CHECK(barrier_phi(0.0, data, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      const double expected = std::log((std::exp(1.0) - 1.0) * std::exp(-t) + 1.0);
      CHECK(barrier_phi(t, data, 1.0, 1.0) ==
            doctest::Approx(expected).epsilon(1e-14));
    }
    // Limit ln(1) = 0 as t grows.
    CHECK(std::abs(barrier_phi(50.0, data, 1.0, 1.0)) <= 1e-12);
  }

  SUBCASE("RK4 integration of the barrier ODE reproduces it") {
    const double sup_A = 1.0, alpha = 1.0;
    const OdeSamples s = comparison_ode_solve(
        [&](double phi, double) {
          return data.s_bar + sup_A * std::exp(alpha * data.sup_w) *
                                  std::exp(-alpha * phi);
        },
        data.c0, 5.0, 1e-3);
    CHECK(std::abs(s.phi.back() - barrier_phi(5.0, data, sup_A, alpha)) <= 1e-8);
  }

  SUBCASE("log argument violations are reported") {
    BarrierData low;
    low.s_bar = -1.0;
    low.sup_w = 0.0;
    low.c0 = std::log(3.0) - 1.0;  // below the stationary value ln(3)
    // Fine for t >= 0, broken for sufficiently negative t.
    CHECK_NOTHROW(barrier_phi(1.0, low, 3.0, 1.0));
    CHECK_THROWS_AS(barrier_phi(-10.0, low, 3.0, 1.0), Error);
    BarrierData pos;
    pos.s_bar = 0.5;
    CHECK_THROWS_AS(barrier_phi(1.0, pos, 1.0, 1.0), Error);
  }
}

TEST_CASE("barrier containment along flows") {
  SUBCASE("constant exact-solution run") {
    auto g = grid2d(16, 16);
    const auto p = constant_problem(g, -std::exp(1.0), 1.0, 0.0);
    FlowConfig config;
    config.record_snapshots = true;
    const FlowResult r = run_flow(ScalarField::zeros(g), p, config);
    REQUIRE(r.converged);
    const BarrierReport report =
        verify_flow_barrier(r.snapshots, p, ScalarField::zeros(g));
    CHECK(report.pass);
    CHECK(report.worst_margin >= 0.0);
  }

  SUBCASE("non-constant problems under both schemes") {
    auto g = grid2d(16, 16);
    const ScalarField S = ScalarField::sample(g, [](const auto& x) {
      return -1.5 + std::sin(2 * kPi * x[0]) + 0.3 * std::cos(2 * kPi * x[1]);
    });
    const ScalarField A = ScalarField::sample(
        g, [](const auto& x) { return 1.0 + 0.5 * std::cos(2 * kPi * x[0]); });
    const double comps[2] = {0.2, -0.1};
    const auto p = ProblemData::create(S, A, ScalarField::constant(g, 0.3), 1.2,
                                       0.6, DriftForm::constant(g, comps));
    REQUIRE(validate(p, HypothesisMode::weak).passed);

    const ScalarField u0 = ScalarField::sample(
        g, [](const auto& x) { return 0.5 * std::cos(2 * kPi * x[1]); });
    for (Scheme scheme : {Scheme::imex, Scheme::explicit_euler}) {
      FlowConfig config;
      config.scheme = scheme;
      config.record_snapshots = true;
      config.trace_stride = scheme == Scheme::explicit_euler ? 200 : 10;
      config.max_time = 60.0;
      const FlowResult r = run_flow(u0, p, config);
      REQUIRE(r.converged);
      CHECK(r.trace.sup_ut_monotone());
      const BarrierReport report = verify_flow_barrier(r.snapshots, p, u0);
      CHECK(report.pass);
    }
  }
}

TEST_CASE("decay-rate fitting") {
  SUBCASE("synthetic exponential trace") {
    FlowTrace trace;
    for (int k = 0; k <= 100; ++k) {
      const double t = 0.05 * k;
      trace.times.push_back(t);
      trace.sup_ut.push_back(std::exp(-1.5 * t));  // sup_ut^2 = e^{-3t}
    }
    CHECK(fit_decay_rate(trace, 0.0, 5.0) == doctest::Approx(-3.0).epsilon(1e-9));
  }

  SUBCASE("constant trace has zero rate") {
    FlowTrace trace;
    for (int k = 0; k <= 10; ++k) {
      trace.times.push_back(0.1 * k);
      trace.sup_ut.push_back(0.7);
    }
    CHECK(std::abs(fit_decay_rate(trace, 0.0, 1.0)) <= 1e-12);
  }

  SUBCASE("insufficient samples are rejected") {
    FlowTrace trace;
    for (int k = 0; k < 4; ++k) {
      trace.times.push_back(0.1 * k);
      trace.sup_ut.push_back(1.0);
    }
    CHECK_THROWS_AS(fit_decay_rate(trace, 0.0, 1.0), Error);
  }
}

TEST_CASE("trace CSV: energy column empty for theta != 0") {
  auto g = grid2d(16, 16);
  const double comps[2] = {0.2, 0.0};
  const auto p = ProblemData::create(
      ScalarField::constant(g, -1.0), ScalarField::constant(g, 1.0),
      ScalarField::zeros(g), 1.0, 1.0, DriftForm::constant(g, comps));
  FlowConfig config;
  const FlowResult r = run_flow(ScalarField::zeros(g), p, config);
  REQUIRE(r.converged);
  CHECK_FALSE(r.trace.has_energy());
  std::ostringstream csv;
  r.trace.write_csv(csv);
  const std::string text = csv.str();
  CHECK(text.rfind("t,sup_ut,energy,min_u,max_u\n", 0) == 0);
  CHECK(text.find(",,") != std::string::npos);
}
