#pragma once
#include <string>
#include <vector>

namespace wldp::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 2 invalid config, 3 regime/validity failure,
// 4 numeric non-convergence.
int run(const std::vector<std::string>& args);

} // namespace wldp::cli
