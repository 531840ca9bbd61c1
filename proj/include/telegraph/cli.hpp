#pragma once

#include <string>
#include <vector>

namespace telegraph {

/// Entry point of the `telegraph` tool. Returns the process exit status:
/// 0 success or pass, 1 configuration or infrastructure error, 2 a failed
/// comparison or acceptance criterion.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace telegraph
