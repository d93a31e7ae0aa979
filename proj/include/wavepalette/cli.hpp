#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wavepalette {

/// Entry point behind the `wavepalette` binary. `args` excludes the program
/// name. Returns 0 on success, 2 on usage or validation errors and 1 on
/// internal failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wavepalette
