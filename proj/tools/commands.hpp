#ifndef PAMLAB_TOOLS_COMMANDS_HPP
#define PAMLAB_TOOLS_COMMANDS_HPP

#include <string>

#include "pam/config.hpp"
#include "pam/io.hpp"

namespace pamlab {

int cmd_chaos(const pam::Config& config);
int cmd_simulate(const pam::Config& config);
int cmd_holder(const pam::Config& config);
int cmd_bounds(const pam::Config& config);
int cmd_report(const std::string& dir);

}  // namespace pamlab

#endif
