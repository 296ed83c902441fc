#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lagiir::cli {

enum ExitCode : int {
    kOk = 0,
    kSelftestFailed = 1,
    kBadInput = 2,
    kUnsupportedAutoQ = 3,
    kStreamTooShort = 4,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lagiir::cli
