#ifndef NCG_TOOLS_CLI_HPP
#define NCG_TOOLS_CLI_HPP

#include <iosfwd>

namespace ncg::cli {

// Exit codes.
inline constexpr int ok = 0;
inline constexpr int not_certified = 1;
inline constexpr int usage_error = 2;
inline constexpr int input_error = 3;

/// Runs one command line. Results go to `out`, diagnostics and usage to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncg::cli

#endif  // NCG_TOOLS_CLI_HPP
