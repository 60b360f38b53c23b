#ifndef KG_CLI_HPP
#define KG_CLI_HPP

namespace kg {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // internal error
inline constexpr int kExitUsage = 2;     // bad flags, bad config, bad input files
inline constexpr int kExitBlowup = 3;    // solver field exceeded the threshold
inline constexpr int kExitFitError = 4;  // underdetermined or degenerate fit

/// Full command-line entry point (subcommands: solve, bench, sweep, rank,
/// model-fit, model-eval). Flag values take precedence over --config file
/// entries, which take precedence over built-in defaults.
int run_cli(int argc, const char* const* argv);

}  // namespace kg

#endif
