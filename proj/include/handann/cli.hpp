#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace handann {

// Subcommands: simulate, annotate, calibrate, sync, protocol, evaluate.
// Returns 0 on success, 1 on a runtime failure (one "error: <kind>: <message>"
// line on `err`), 2 on a usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Eps grid spec: "start:step:stop" (inclusive) or a comma list.
std::vector<double> parse_eps_grid(const std::string& spec);

}  // namespace handann
