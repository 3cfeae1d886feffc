#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "config.hpp"

namespace kwcli {

namespace fs = std::filesystem;

namespace {

void emit(const json& report, const std::string& out_dir, const char* filename) {
  std::cout << report.dump(2) << std::endl;
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / filename);
  out << report.dump(2) << '\n';
}

std::string out_file(const std::string& out_dir, const char* filename) {
  fs::create_directories(out_dir.empty() ? "." : out_dir);
  return (fs::path(out_dir.empty() ? "." : out_dir) / filename).string();
}

/// Weak-hypothesis gate shared by the solving commands.
void require_valid(const ProblemSet& set) {
  kw_hypothesis_report report{};
  check(kw_problem_validate(set.problem.get(), 0, &report));
  if (report.passed == 0) {
    std::cout << hypothesis_report_json(report).dump(2) << std::endl;
    throw CliError(kExitHypothesis, "problem data fails the hypotheses");
  }
}

struct SolverSettings {
  std::string method = "newton";
  double tol = 1e-12;           // newton/monotone stopping tolerance
  int max_iter = 0;             // 0 = per-method default
  int scheme = KW_SCHEME_IMEX;  // flow
  double dt = 0.0;
  double residual_tol = 1e-8;
  double max_time = 100.0;
  int trace_stride = 10;
};

SolverSettings solver_settings(const Config& config) {
  SolverSettings s;
  if (!config.data.contains("solver")) return s;
  const json& j = config.data["solver"];
  s.method = j.value("method", s.method);
  s.tol = j.value("tol", s.method == "monotone" ? 1e-10 : 1e-12);
  s.max_iter = j.value("max_iter", 0);
  if (j.contains("scheme")) {
    const std::string scheme = j["scheme"].get<std::string>();
    if (scheme == "explicit") s.scheme = KW_SCHEME_EXPLICIT;
    else if (scheme == "imex") s.scheme = KW_SCHEME_IMEX;
    else throw CliError(kExitInput, "solver.scheme must be 'explicit' or 'imex'");
  }
  s.dt = j.value("dt", 0.0);
  s.residual_tol = j.value("residual_tol", s.residual_tol);
  s.max_time = j.value("max_time", s.max_time);
  s.trace_stride = j.value("trace_stride", s.trace_stride);
  if (s.method != "flow" && s.method != "newton" && s.method != "monotone")
    throw CliError(kExitInput, "solver.method must be flow, newton or monotone");
  return s;
}

struct SolveOutcome {
  Field u;
  bool converged = false;
  json report;
};

SolveOutcome run_one_solver(const ProblemSet& set, const SolverSettings& s,
                            const Config& config, const std::string& method,
                            const std::string& out_dir, bool write_trace) {
  SolveOutcome outcome;
  json& report = outcome.report;
  report["method"] = method;

  Field u0;
  if (config.data.contains("solver") && config.data["solver"].contains("u0"))
    u0 = make_field(config, config.data["solver"]["u0"], set.grid.get(), "u0");
  else
    check(kw_field_zeros(set.grid.get(), u0.out()));

  if (method == "newton") {
    int iterations = 0, converged = 0;
    double final_residual = 0.0;
    check(kw_newton_solve(set.problem.get(), u0.get(), s.tol,
                          s.max_iter > 0 ? s.max_iter : 50, outcome.u.out(),
                          &iterations, &converged, &final_residual),
          kExitNoConvergence);
    outcome.converged = converged != 0;
    report["iterations"] = iterations;
    report["final_residual"] = final_residual;
    report["tol"] = s.tol;
  } else if (method == "monotone") {
    UpperLower ul;
    check(kw_upper_lower_build(set.problem.get(), nullptr, nullptr, nullptr,
                               ul.out()),
          kExitNoConvergence);
    kw_upper_lower_info info{};
    check(kw_upper_lower_info_get(ul.get(), &info));
    int iterations = 0, converged = 0, monotone = 0;
    double final_residual = 0.0;
    check(kw_monotone_solve(set.problem.get(), ul.get(), s.tol,
                            s.max_iter > 0 ? s.max_iter : 20000, outcome.u.out(),
                            &iterations, &converged, &monotone, &final_residual),
          kExitNoConvergence);
    outcome.converged = converged != 0;
    report["iterations"] = iterations;
    report["final_residual"] = final_residual;
    report["tol"] = s.tol;
    report["iterates_monotone"] = monotone != 0;
    report["upper_lower"] = {{"a", info.a},
                             {"b", info.b},
                             {"m", info.m},
                             {"S_mean", info.s_bar},
                             {"A_mean", info.a_bar},
                             {"sup_residual_u_plus", info.sup_residual_plus},
                             {"min_residual_u_minus", info.min_residual_minus}};
    // Enclosure margins of the returned solution.
    Field u_plus, u_minus;
    check(kw_upper_lower_field(ul.get(), KW_UL_U_PLUS, u_plus.out()));
    check(kw_upper_lower_field(ul.get(), KW_UL_U_MINUS, u_minus.out()));
    const double* pu = kw_field_data(outcome.u.get());
    const double* pp = kw_field_data(u_plus.get());
    const double* pm = kw_field_data(u_minus.get());
    const int64_t n = kw_field_size(outcome.u.get());
    double below = std::numeric_limits<double>::infinity();
    double above = std::numeric_limits<double>::infinity();
    for (int64_t i = 0; i < n; ++i) {
      below = std::min(below, pp[i] - pu[i]);
      above = std::min(above, pu[i] - pm[i]);
    }
    report["enclosure_margin_below_u_plus"] = below;
    report["enclosure_margin_above_u_minus"] = above;
  } else {  // flow
    kw_flow_config fc{};
    fc.scheme = s.scheme;
    fc.dt = s.dt;
    fc.residual_tol = s.residual_tol;
    fc.max_time = s.max_time;
    fc.trace_stride = s.trace_stride;
    fc.record_snapshots = 0;
    FlowResult result;
    check(kw_run_flow(set.problem.get(), u0.get(), &fc, result.out()),
          kExitNoConvergence);
    outcome.converged = kw_flow_result_converged(result.get()) != 0;
    check(kw_flow_result_solution(result.get(), outcome.u.out()));
    report["scheme"] = s.scheme == KW_SCHEME_IMEX ? "imex" : "explicit";
    report["dt"] = kw_flow_result_dt(result.get());
    report["steps"] = kw_flow_result_steps(result.get());
    report["final_time"] = kw_flow_result_final_time(result.get());
    report["final_residual"] = kw_flow_result_final_residual(result.get());
    report["residual_tol"] = s.residual_tol;
    int mono = 0;
    check(kw_flow_result_sup_ut_monotone(result.get(), &mono));
    report["sup_ut_monotone"] = mono != 0;
    if (kw_flow_result_has_energy(result.get()) != 0) {
      check(kw_flow_result_energy_monotone(result.get(), &mono));
      report["energy_monotone"] = mono != 0;
    }
    if (write_trace) {
      const std::string trace_path = out_file(out_dir, (method + "_trace.csv").c_str());
      check(kw_flow_result_write_trace_csv(result.get(), trace_path.c_str()));
      report["trace_file"] = trace_path;
    }
  }
  report["converged"] = outcome.converged;
  return outcome;
}

}  // namespace

int cmd_validate(const std::string& config_path, const std::string& out_dir) {
  const Config config = load_config(config_path);
  const ProblemSet set = make_problem(config);
  const bool strict = config.data.value("hypotheses", std::string("weak")) == "strict";
  kw_hypothesis_report report{};
  check(kw_problem_validate(set.problem.get(), strict ? 1 : 0, &report));
  emit(hypothesis_report_json(report), out_dir, "validate.json");
  return report.passed != 0 ? kExitOk : kExitHypothesis;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  const Config config = load_config(config_path);
  const ProblemSet set = make_problem(config);
  require_valid(set);
  const SolverSettings s = solver_settings(config);

  SolveOutcome outcome =
      run_one_solver(set, s, config, s.method, out_dir, /*write_trace=*/true);

  const std::string solution_path = out_file(out_dir, "solution.txt");
  check(kw_field_write(outcome.u.get(), solution_path.c_str()));
  outcome.report["solution_file"] = solution_path;
  emit(outcome.report, out_dir, "report.json");
  return outcome.converged ? kExitOk : kExitNoConvergence;
}

int cmd_mms(const std::string& config_path, const std::string& out_dir,
            const std::vector<int>& grid_override) {
  const Config config = load_config(config_path);
  if (!config.data.contains("mms") || !config.data["mms"].contains("u_star"))
    throw CliError(kExitInput, "mms requires a closed-form 'mms.u_star'");
  const json& mms = config.data["mms"];
  std::vector<int> sizes = grid_override;
  if (sizes.empty() && mms.contains("grids"))
    for (const auto& v : mms["grids"]) sizes.push_back(v.get<int>());
  if (sizes.size() < 2)
    throw CliError(kExitInput, "mms needs at least two grid sizes");

  const json& gridspec = require(config.data, "grid", "grid specification");
  const int dim = require(gridspec, "dim", "grid dimension").get<int>();
  const json& problem_spec = require(config.data, "problem", "problem data");
  const bool analytic_S = problem_spec.contains("S");
  SolverSettings s = solver_settings(config);
  if (!config.data.contains("solver")) s.tol = 1e-11;

  std::vector<double> errors;
  std::vector<double> orders;
  for (std::size_t level = 0; level < sizes.size(); ++level) {
    Grid grid;
    {
      std::vector<int> points(static_cast<size_t>(dim), sizes[level]);
      std::vector<double> periods;
      if (gridspec.contains("periods"))
        for (const auto& v : gridspec["periods"]) periods.push_back(v.get<double>());
      else
        periods.assign(static_cast<size_t>(dim), 1.0);
      check(kw_grid_create(dim, points.data(), periods.data(), grid.out()));
    }
    Field u_star = make_field(config, mms["u_star"], grid.get(), "u_star");

    ProblemSet set;
    if (analytic_S) {
      set = make_problem(config, std::move(grid));
      require_valid(set);
    } else {
      // Discretely manufactured S: u_star solves the grid equation exactly.
      set.grid = std::move(grid);
      set.alpha = require(problem_spec, "alpha", "exponent alpha").get<double>();
      set.beta = require(problem_spec, "beta", "exponent beta").get<double>();
      set.A = make_field(config, require(problem_spec, "A", "A field"),
                         set.grid.get(), "A");
      set.B = make_field(config, require(problem_spec, "B", "B field"),
                         set.grid.get(), "B");
      set.theta = make_theta(config, set.grid.get());
      check(kw_manufacture(u_star.get(), set.A.get(), set.B.get(), set.alpha,
                           set.beta, set.theta.get(), set.problem.out()));
    }

    SolveOutcome outcome =
        run_one_solver(set, s, config, s.method, out_dir, /*write_trace=*/false);
    if (!outcome.converged)
      throw CliError(kExitNoConvergence,
                     "solver did not converge at N = " + std::to_string(sizes[level]));
    double err = 0.0;
    check(kw_field_max_abs_diff(outcome.u.get(), u_star.get(), &err));
    errors.push_back(err);
    if (level > 0) {
      const double ratio = static_cast<double>(sizes[level]) / sizes[level - 1];
      orders.push_back(std::log(errors[level - 1] / errors[level]) / std::log(ratio));
    }
  }

  const bool exact = *std::max_element(errors.begin(), errors.end()) < 1e-10;
  const std::string csv_path = out_file(out_dir, "mms.csv");
  {
    std::ofstream csv(csv_path);
    csv << "N,sup_error,observed_order\n";
    char buf[128];
    for (std::size_t i = 0; i < errors.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,", sizes[i], errors[i]);
      csv << buf;
      if (i == 0)
        csv << "";
      else if (exact)
        csv << "exact";
      else
        csv << orders[i - 1];
      csv << '\n';
    }
  }

  json report;
  report["grids"] = sizes;
  report["sup_errors"] = errors;
  report["observed_orders"] = orders;
  report["exact"] = exact;
  report["csv_file"] = csv_path;
  if (exact) {
    report["verdict"] = "exact (errors below 1e-10 at every size)";
    emit(report, out_dir, "mms.json");
    return kExitOk;
  }
  const double finest = orders.back();
  report["finest_pair_order"] = finest;
  const bool ok = finest >= 1.8 && finest <= 2.2;
  report["verdict"] = ok ? "second-order convergence confirmed"
                         : "observed order outside [1.8, 2.2]";
  emit(report, out_dir, "mms.json");
  return ok ? kExitOk : kExitVerification;
}

int cmd_bounds(const std::string& config_path, const std::string& solution_path,
               const std::string& out_dir) {
  const Config config = load_config(config_path);
  const ProblemSet set = make_problem(config);

  Field u;
  check(kw_field_read(solution_path.c_str(), u.out()));
  Grid field_grid;
  check(kw_field_grid(u.get(), field_grid.out()));
  if (kw_grid_equal(field_grid.get(), set.grid.get()) == 0)
    throw CliError(kExitInput, "solution file does not match the configured grid");

  kw_bounds_report r{};
  check(kw_verify_solution_bounds(set.problem.get(), u.get(), 0.0, &r),
        kExitHypothesis);

  json report;
  report["lower_bound"] = {{"C", r.lower_bound_c},
                           {"t0", r.t0},
                           {"w_sup_norm", r.w_sup_norm},
                           {"min_u", r.min_u},
                           {"margin", r.lower_margin},
                           {"passed", r.lower_pass != 0}};
  if (r.l2_evaluated != 0) {
    report["l2_bound"] = {{"eta", r.eta},
                          {"C_tilde", r.c_tilde},
                          {"bound", r.l2_bound},
                          {"l2_norm_u", r.l2_norm_u},
                          {"margin", r.l2_margin},
                          {"passed", r.l2_pass != 0}};
  } else {
    report["l2_bound"] = nullptr;
    report["note"] = "L2 bound skipped: min A <= 0 (weak hypotheses only)";
  }
  report["passed"] = r.passed != 0;
  emit(report, out_dir, "bounds.json");
  return r.passed != 0 ? kExitOk : kExitVerification;
}

int cmd_cross_validate(const std::string& config_path, const std::string& out_dir) {
  const Config config = load_config(config_path);
  const ProblemSet set = make_problem(config);
  require_valid(set);
  SolverSettings s = solver_settings(config);

  const char* methods[3] = {"flow", "newton", "monotone"};
  json report;
  std::vector<Field> solutions;
  for (const char* method : methods) {
    SolverSettings ms = s;
    ms.method = method;
    ms.tol = std::string(method) == "monotone" ? 1e-10 : 1e-12;
    SolveOutcome outcome =
        run_one_solver(set, ms, config, method, out_dir, /*write_trace=*/false);
    if (!outcome.converged)
      throw CliError(kExitNoConvergence,
                     std::string(method) + " solver did not converge");
    const std::string path = out_file(out_dir, (std::string(method) + ".txt").c_str());
    check(kw_field_write(outcome.u.get(), path.c_str()));
    report[method] = outcome.report;
    solutions.push_back(std::move(outcome.u));
  }

  const double tol = config.data.value("cross_tol", 1e-6);
  const kw_field* raw[3] = {solutions[0].get(), solutions[1].get(),
                            solutions[2].get()};
  double max_diff = 0.0;
  int pass = 0;
  check(kw_cross_validate(raw, 3, tol, &max_diff, &pass));

  double fn = 0.0, fm = 0.0, nm = 0.0;
  check(kw_field_max_abs_diff(raw[0], raw[1], &fn));
  check(kw_field_max_abs_diff(raw[0], raw[2], &fm));
  check(kw_field_max_abs_diff(raw[1], raw[2], &nm));
  report["pairwise_sup_diff"] = {{"flow_vs_newton", fn},
                                 {"flow_vs_monotone", fm},
                                 {"newton_vs_monotone", nm}};
  report["max_pairwise_diff"] = max_diff;
  report["cross_tol"] = tol;
  report["passed"] = pass != 0;
  emit(report, out_dir, "cross_validate.json");
  return pass != 0 ? kExitOk : kExitVerification;
}

}  // namespace kwcli
