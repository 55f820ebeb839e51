#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lumpsum {

/// One batch invocation: a command, an optional model config and
/// command-line overrides.
///
/// Overrides are `key=value` strings. Model keys (gamma, k_a, K, R_a, x0,
/// schedule) replace config values; the remaining keys tune the run (grid,
/// simulation and sweep settings, see `lumpsum --help`). The dedicated
/// flags (seed, paths, ny, ymax) are applied last, so the precedence is
/// config file < --set < dedicated flag.
struct RunManifest {
    std::string command;
    std::string config_path;  ///< empty: built-in model defaults
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<int> n_y;
    std::optional<double> y_max;
};

const std::vector<std::string>& command_names();

/// Executes the manifest and writes its artifacts under out_dir.
/// Returns 0 on success, 1 for user errors, 2 for internal failures; on
/// failure prints one line "error: <code>: <message>" to `err` and removes
/// every file this run created.
int run(const RunManifest& manifest, std::ostream& log, std::ostream& err);

/// Parses argv with CLI11 and calls run().
int cli_main(int argc, char** argv);

}  // namespace lumpsum
