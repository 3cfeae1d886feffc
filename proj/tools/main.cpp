// kw: config-driven experiment runner for the generalized Kazdan-Warner
// solver suite. See README.md for the config format.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "handles.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Solvers and a-priori-bound diagnostics for the generalized "
               "Kazdan-Warner equation on flat tori"};
  app.require_subcommand(1);

  std::string config_path, out_dir, solution_path;
  std::vector<int> grids;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")
        ->required();
    cmd->add_option("--out", out_dir, "output directory (default: current)");
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "check the solvability hypotheses of the problem data");
  add_common(validate);

  CLI::App* solve = app.add_subcommand(
      "solve", "run the configured solver and dump the solution");
  add_common(solve);

  CLI::App* mms = app.add_subcommand(
      "mms", "manufactured-solution refinement study across grid sizes");
  add_common(mms);
  mms->add_option("--grids", grids, "grid sizes (overrides mms.grids)")
      ->delimiter(',');

  CLI::App* bounds = app.add_subcommand(
      "bounds", "verify the a-priori bounds against a solution dump");
  add_common(bounds);
  bounds->add_option("--solution", solution_path, "solution field dump")
      ->required();

  CLI::App* cross = app.add_subcommand(
      "cross-validate", "run all three solvers and compare the solutions");
  add_common(cross);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kwcli::kExitInput;
  }

  try {
    if (validate->parsed()) return kwcli::cmd_validate(config_path, out_dir);
    if (solve->parsed()) return kwcli::cmd_solve(config_path, out_dir);
    if (mms->parsed()) return kwcli::cmd_mms(config_path, out_dir, grids);
    if (bounds->parsed())
      return kwcli::cmd_bounds(config_path, solution_path, out_dir);
    if (cross->parsed()) return kwcli::cmd_cross_validate(config_path, out_dir);
  } catch (const kwcli::CliError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kwcli::kExitInput;
  }
  return kwcli::kExitInput;
}
