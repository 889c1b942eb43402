#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace compkit {

/// Exit codes of the `compkit` tool.
inline constexpr int exit_ok = 0;
inline constexpr int exit_user_error = 1;
inline constexpr int exit_parse_error = 2;

/// Runs one `compkit` invocation. `args` excludes the program name. Payload
/// goes to `out`, diagnostics to `err`; `run` lets the component inherit
/// the real stdio.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace compkit
