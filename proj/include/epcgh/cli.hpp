#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "epcgh/experiments.hpp"

namespace epcgh {

enum class OutputFormat { Csv, Json };

struct CliConfig {
  std::string subcommand;
  std::string output_dir;
  std::uint64_t seed = 42;
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kOutDirEnv = "EPCGH_OUT_DIR";

/// `args` excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names the dispatcher knows, in help order.
std::vector<std::string> cli_dispatch_names();

/// Writes `<stem>.csv` or `<stem>.json` into the output directory and a summary table to `out`.
/// Throws std::runtime_error if the directory or file cannot be written.
std::string emit(const std::vector<ResultRow>& rows, const ExperimentRecipe& recipe, const std::string& stem,
                 const CliConfig& config, std::ostream& out);

}  // namespace epcgh
