#ifndef SUPERFRM_CLI_HPP
#define SUPERFRM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace superfrm::cli {

enum ExitCode : int { ok = 0, usage = 2, invalid_model = 3, resource_bound = 4 };

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace superfrm::cli

#endif // SUPERFRM_CLI_HPP
