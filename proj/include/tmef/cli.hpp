#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tmef/models.hpp"

namespace tmef::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kValidationError = 2, kNonConvergence = 3 };

/// Flat key=value lines; '#' starts a comment, blank lines are skipped and
/// whitespace around keys and values is trimmed. Order is preserved.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

ConfigEntries parse_config(std::istream& in);
ConfigEntries read_config_file(const std::filesystem::path& path);

/// Single-column CSV with header "y".
TimeSeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(std::ostream& out, const TimeSeries& series);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Entry point of the `tmef` executable. Subcommands: simulate, estimate,
/// select-points, info-curve, table1. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tmef::cli
