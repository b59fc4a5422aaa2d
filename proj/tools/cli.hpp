#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cgclust::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kComputation = 4 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cgclust::cli
