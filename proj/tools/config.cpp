#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "expr.hpp"

namespace kwcli {

namespace fs = std::filesystem;

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitInput, "cannot open config file: " + path);
  Config config;
  try {
    in >> config.data;
  } catch (const json::exception& e) {
    throw CliError(kExitInput, std::string("config is not valid JSON: ") + e.what());
  }
  config.base_dir = fs::path(path).parent_path().string();
  return config;
}

const json& require(const json& obj, const std::string& key, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw CliError(kExitInput,
                   std::string("config is missing '") + key + "' (" + what + ")");
  return *it;
}

Grid make_grid(const Config& config) {
  const json& g = require(config.data, "grid", "grid specification");
  const int dim = require(g, "dim", "grid dimension").get<int>();
  std::vector<int> points;
  std::vector<double> periods;
  for (const auto& v : require(g, "points", "points per axis")) points.push_back(v.get<int>());
  if (g.contains("periods"))
    for (const auto& v : g["periods"]) periods.push_back(v.get<double>());
  else
    periods.assign(points.size(), 1.0);
  if (static_cast<int>(points.size()) != dim || static_cast<int>(periods.size()) != dim)
    throw CliError(kExitInput, "grid points/periods do not match the dimension");
  Grid grid;
  check(kw_grid_create(dim, points.data(), periods.data(), grid.out()));
  return grid;
}

namespace {

std::string resolve_path(const Config& config, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute() || config.base_dir.empty()) return path;
  return (fs::path(config.base_dir) / p).string();
}

Field field_from_expr(const std::string& text, const kw_grid* grid,
                      const char* what) {
  const int dim = kw_grid_dim(grid);
  kwcli::Expr expr = [&] {
    try {
      return Expr::parse(text, dim);
    } catch (const ExprError& e) {
      throw CliError(kExitInput, std::string("cannot parse expression for ") +
                                     what + ": " + e.what());
    }
  }();

  const int64_t count = kw_grid_node_count(grid);
  std::vector<int> n(static_cast<size_t>(dim));
  std::vector<double> h(static_cast<size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    n[static_cast<size_t>(a)] = kw_grid_points(grid, a);
    h[static_cast<size_t>(a)] = kw_grid_spacing(grid, a);
  }
  std::vector<double> values(static_cast<size_t>(count));
  double x[3] = {0.0, 0.0, 0.0};
  for (int64_t i = 0; i < count; ++i) {
    int64_t rest = i;
    for (int a = dim - 1; a >= 0; --a) {
      const auto ia = static_cast<size_t>(a);
      x[ia] = static_cast<double>(rest % n[ia]) * h[ia];
      rest /= n[ia];
    }
    values[static_cast<size_t>(i)] = expr.eval(x);
  }
  Field field;
  check(kw_field_from_values(grid, values.data(), count, field.out()));
  return field;
}

}  // namespace

Field make_field(const Config& config, const json& spec, const kw_grid* grid,
                 const char* what) {
  Field field;
  if (spec.is_number()) {
    check(kw_field_fill(grid, spec.get<double>(), field.out()));
    return field;
  }
  if (spec.is_string()) return field_from_expr(spec.get<std::string>(), grid, what);
  if (spec.is_object() && spec.contains("expr"))
    return field_from_expr(spec["expr"].get<std::string>(), grid, what);
  if (spec.is_object() && spec.contains("file")) {
    const std::string path = resolve_path(config, spec["file"].get<std::string>());
    check(kw_field_read(path.c_str(), field.out()));
    Grid field_grid;
    check(kw_field_grid(field.get(), field_grid.out()));
    if (grid != nullptr && kw_grid_equal(field_grid.get(), grid) == 0)
      throw CliError(kExitInput, std::string("field file for ") + what +
                                     " does not match the configured grid: " + path);
    return field;
  }
  throw CliError(kExitInput, std::string("field spec for ") + what +
                                 " must be a number, an expression string, "
                                 "{\"expr\":...} or {\"file\":...}");
}

Drift make_theta(const Config& config, const kw_grid* grid) {
  const json& problem = require(config.data, "problem", "problem data");
  Drift drift;
  if (!problem.contains("theta") || problem["theta"].is_null()) return drift;
  const json& t = problem["theta"];
  const int dim = kw_grid_dim(grid);

  if (t.is_object() && t.contains("constant")) {
    std::vector<double> c;
    for (const auto& v : t["constant"]) c.push_back(v.get<double>());
    if (static_cast<int>(c.size()) != dim)
      throw CliError(kExitInput, "theta.constant needs one component per axis");
    check(kw_drift_constant(grid, c.data(), drift.out()));
    return drift;
  }
  if (t.is_object() && t.contains("stream")) {
    Field psi = make_field(config, t["stream"], grid, "theta stream function");
    check(kw_drift_stream2d(psi.get(), drift.out()));
    return drift;
  }
  if (t.is_object() && t.contains("components")) {
    const json& comps = t["components"];
    if (static_cast<int>(comps.size()) != dim)
      throw CliError(kExitInput, "theta.components needs one entry per axis");
    std::vector<Field> fields;
    std::vector<const kw_field*> raw;
    for (const auto& spec : comps) {
      fields.push_back(make_field(config, spec, grid, "theta component"));
      raw.push_back(fields.back().get());
    }
    check(kw_drift_from_components(raw.data(), dim, drift.out()));
    return drift;
  }
  throw CliError(kExitInput,
                 "theta must provide 'constant', 'stream' or 'components'");
}

ProblemSet make_problem(const Config& config, Grid override_grid) {
  ProblemSet set;
  set.grid = override_grid ? std::move(override_grid) : make_grid(config);
  const json& problem = require(config.data, "problem", "problem data");
  set.alpha = require(problem, "alpha", "exponent alpha").get<double>();
  set.beta = require(problem, "beta", "exponent beta").get<double>();
  set.S = make_field(config, require(problem, "S", "S field"), set.grid.get(), "S");
  set.A = make_field(config, require(problem, "A", "A field"), set.grid.get(), "A");
  set.B = make_field(config, require(problem, "B", "B field"), set.grid.get(), "B");
  set.theta = make_theta(config, set.grid.get());
  check(kw_problem_create(set.S.get(), set.A.get(), set.B.get(), set.alpha,
                          set.beta, set.theta.get(), set.problem.out()));
  return set;
}

json hypothesis_report_json(const kw_hypothesis_report& r) {
  json out;
  out["mode"] = r.strict != 0 ? "strict" : "weak";
  out["passed"] = r.passed != 0;
  out["A_nonnegative"] = r.a_nonnegative != 0;
  out["A_not_identically_zero"] = r.a_not_identically_zero != 0;
  out["B_nonnegative"] = r.b_nonnegative != 0;
  out["S_mean_negative"] = r.s_mean_negative != 0;
  out["theta_coclosed"] = r.theta_coclosed != 0;
  if (r.strict != 0) out["A_strictly_positive"] = r.a_strictly_positive != 0;
  out["values"] = {{"S_mean", r.s_mean},
                   {"min_A", r.a_min},
                   {"max_A", r.a_max},
                   {"min_B", r.b_min},
                   {"max_div_theta", r.theta_max_divergence}};
  json failures = json::array();
  if (r.a_nonnegative == 0) failures.push_back("A takes negative values");
  if (r.a_not_identically_zero == 0) failures.push_back("A identically zero");
  if (r.strict != 0 && r.a_strictly_positive == 0)
    failures.push_back("A not strictly positive");
  if (r.b_nonnegative == 0) failures.push_back("B takes negative values");
  if (r.s_mean_negative == 0) failures.push_back("integral of S is nonnegative");
  if (r.theta_coclosed == 0) failures.push_back("theta is not divergence-free");
  out["failures"] = failures;
  return out;
}

}  // namespace kwcli
