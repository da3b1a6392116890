#include <CLI11.hpp>

#include <iostream>
#include <utility>

#include "mibench/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Motor-imagery EEG classification benchmark"};
  app.require_subcommand(1, 1);

  mibench::CommandOptions opts;
  const std::pair<const char*, const char*> commands[] = {
      {"run-ss", "subject-specific sweep over eval.ss_sizes"},
      {"run-si", "subject-independent sweep over eval.si_sizes"},
      {"synth", "write a synthetic trial set (manifest.csv + .mieeg files)"},
      {"ingest-check", "load the configured data and print a summary"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "config file (key = value lines)")->required();
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--seed", opts.seed, "master seed override");
    sub->add_option("--threads", opts.threads, "worker threads (0 = MIBENCH_THREADS or auto)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? mibench::kExitOk : mibench::kExitUsage;
  }
  opts.subcommand = app.get_subcommands().front()->get_name();
  return mibench::run_command(opts, std::cout, std::cerr);
}
