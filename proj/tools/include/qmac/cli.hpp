#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qmac::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  ///< bad arguments, malformed config, violated precondition
  kExitNumerical = 2,   ///< non-finite result or a failed check
};

/// Flags shared by every subcommand.
struct GlobalOptions {
  std::filesystem::path config;
  /// Output stem: <out>.csv and <out>.json. Empty: CSV goes to stdout.
  std::filesystem::path out;
  std::uint64_t seed = 1;
  int jobs = 1;  ///< 0 = hardware concurrency
  bool bits = false;
};

/// Parses argv and runs one subcommand. Does not throw.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Subcommands. These throw ValidationError / NumericalError; run() maps them
// to exit codes.
int heterodyne_sweep(const GlobalOptions& opts, std::ostream& out);
int homodyne_sweep(const GlobalOptions& opts, bool optimize, std::ostream& out);
int region(const GlobalOptions& opts, std::ostream& out);
int holevo(const GlobalOptions& opts, bool oracle, std::ostream& out);
/// level is "quick" or "full". With an empty opts.config the built-in
/// reference values are used.
int verify(const GlobalOptions& opts, const std::string& level, std::ostream& out);

/// Reference values checked by `verify` when no fixture file is given.
nlohmann::json builtin_reference_values();

/// 12 significant digits.
std::string format_number(double x);

/// Grid axis: an array of numbers, or {start, stop, points, spacing} with
/// spacing "linear" (default) or "log".
std::vector<double> axis_values(const nlohmann::json& axis, const std::string& name);

/// Calls task(i) for every i < n on up to `jobs` threads. If tasks throw, the
/// exception of the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task);

}  // namespace qmac::cli
