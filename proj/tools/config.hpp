#pragma once

// JSON run configuration -> C API objects. Field specs accept a number
// (constant), a string (expression over x1..xn), {"expr": "..."} or
// {"file": "dump.txt"}; file paths resolve relative to the config file.

#include <json.hpp>

#include <optional>
#include <string>

#include "handles.hpp"

namespace kwcli {

using json = nlohmann::json;

struct Config {
  json data;
  std::string base_dir;  // directory of the config file
};

Config load_config(const std::string& path);

/// Fetches config.data[key] or throws a kExitInput CliError naming the key.
const json& require(const json& obj, const std::string& key, const char* what);

Grid make_grid(const Config& config);

/// Builds a field from a spec; when `grid` is given, expression fields are
/// evaluated on it and file fields must match it.
Field make_field(const Config& config, const json& spec, const kw_grid* grid,
                 const char* what);

/// Builds theta from config.problem.theta; empty handle when absent.
Drift make_theta(const Config& config, const kw_grid* grid);

struct ProblemSet {
  Grid grid;
  Field S, A, B;
  Drift theta;  // may be empty (theta = 0)
  Problem problem;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Grid + fields + problem from the config; `override_grid` substitutes the
/// grid (used by refinement studies re-evaluating expressions).
ProblemSet make_problem(const Config& config, Grid override_grid = Grid());

json hypothesis_report_json(const kw_hypothesis_report& report);

}  // namespace kwcli
