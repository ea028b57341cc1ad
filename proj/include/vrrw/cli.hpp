#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vrrw {

// Exit codes of run_cli.
constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

// args excludes the program name. Text output that is not routed to a file
// goes to `out`; diagnostics and warnings go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vrrw
