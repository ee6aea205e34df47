#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddm::cli {

enum ExitCode : int {
    ok = 0,
    usage = 2,
    unsupported_class = 3,
    numerical_failure = 4,
    verification_failure = 5,
};

// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ddm::cli
