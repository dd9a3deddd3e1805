#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hrkit {

struct CommandResult {
  nlohmann::json output;
  bool violation = false;  // verify found a deficit below -10 quad_error inside the hypotheses
};

std::vector<std::string> command_names();

// Validates the config against the command's keys (unknown keys are errors) and runs it.
CommandResult run_command(const std::string& command, const nlohmann::json& config);

}  // namespace hrkit
