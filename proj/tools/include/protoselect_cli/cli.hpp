#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace protoselect::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

/// Entry point behind the `protoselect` executable. `args` excludes the
/// program name. Reports go to `out`, diagnostics and summaries to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs a benchmark grid file, writing tables into `out_dir`.
int run_bench(const std::filesystem::path& grid_file, const std::filesystem::path& out_dir,
              std::size_t jobs, std::ostream& err);

}  // namespace protoselect::cli
