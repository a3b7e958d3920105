#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pinnls_cli/config.hpp"

namespace pinnls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_gals(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_study(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_problems(std::ostream& out);

const std::vector<std::string>& study_names();

/// Full command line entry point; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pinnls::cli
