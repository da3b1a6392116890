#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mibench/config.hpp"

namespace mibench {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitEvaluation = 3 };

struct CommandOptions {
  std::string subcommand;  // run-ss, run-si, synth, ingest-check
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;  // 0: MIBENCH_THREADS or hardware concurrency
};

/// Trials named by the config: the manifest when set, otherwise synthetic
/// data generated from the synth.* keys. Applies channel selection.
TrialSet load_configured_data(const RunConfig& config);

int run_command(const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace mibench
