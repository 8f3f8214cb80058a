#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace patchy::cli {

enum Exit : int {
    Ok = 0,
    Failure = 1,
    Validation = 2,
    Disagreement = 3,
    NotControllable = 4,
    TransientUnresolved = 5,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace patchy::cli
