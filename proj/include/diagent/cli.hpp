#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diagent::cli {

// Runs one subcommand. args[0] is the program name. Returns 0 on success,
// 2 on usage errors and 1 on computation errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace diagent::cli
