#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmlcost {

// Runs the command-line tool on the given arguments (program name excluded)
// and returns the process exit code.  in supplies the program source when
// the argument list contains the bare `--` marker.
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace mmlcost
