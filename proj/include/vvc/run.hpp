#pragma once

#include <string>

#include "vvc/io.hpp"

namespace vvc {

// Exit-code contract: 0 ok, 2 config, 3 assumptions, 4 resolution, 5 family.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAssumptions = 3;
inline constexpr int kExitResolution = 4;
inline constexpr int kExitFamily = 5;

int cmd_bounds(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_localization(const RunConfig& cfg);
int cmd_control(const RunConfig& cfg);
int cmd_cost_scan(const RunConfig& cfg);
int cmd_example5(const RunConfig& cfg);

int run_command(const std::string& name, const RunConfig& cfg);

}  // namespace vvc
