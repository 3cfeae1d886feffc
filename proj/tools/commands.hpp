#pragma once

#include <string>
#include <vector>

namespace kwcli {

int cmd_validate(const std::string& config_path, const std::string& out_dir);
int cmd_solve(const std::string& config_path, const std::string& out_dir);
int cmd_mms(const std::string& config_path, const std::string& out_dir,
            const std::vector<int>& grid_override);
int cmd_bounds(const std::string& config_path, const std::string& solution_path,
               const std::string& out_dir);
int cmd_cross_validate(const std::string& config_path, const std::string& out_dir);

}  // namespace kwcli
