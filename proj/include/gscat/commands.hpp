#pragma once

#include <string>
#include <vector>

#include "gscat/config.hpp"

namespace gscat {

struct CommandResult {
  int exit_code = 0;               // 0 unless verify found a failing check
  std::vector<std::string> files;  // written, in order
  std::string summary;             // one or a few lines for the terminal
};

std::vector<std::string> command_names();
// runs one verb (single, bound, two, budget, xsec, oracle, verify); every
// verb writes <verb>_<graph>.csv plus a .json sidecar into c.output_dir()
CommandResult run_command(const std::string& verb, const RunConfig& c);

}  // namespace gscat
