#include "mibench/app.hpp"

#include <ostream>

#include "mibench/parallel.hpp"
#include "mibench/report.hpp"

namespace mibench {

namespace {

constexpr const char* kToolVersion = "1.0.0";

bool is_synthetic(const RunConfig& c) { return c.manifest.empty(); }

}  // namespace

TrialSet load_configured_data(const RunConfig& config) {
  TrialSet set = is_synthetic(config) ? generate_synthetic(config.synth, config.synth_seed)
                                      : load_trial_set(config.manifest, config.protocol);
  if (!config.channels.empty()) set = select_channels(set, config.channels);
  return set;
}

int run_command(const CommandOptions& options, std::ostream& log, std::ostream& err) {
  const auto& cmd = options.subcommand;
  if (cmd != "run-ss" && cmd != "run-si" && cmd != "synth" && cmd != "ingest-check") {
    err << "unknown subcommand '" << cmd << "' (expected run-ss, run-si, synth, ingest-check)\n";
    return kExitUsage;
  }

  RunConfig config;
  try {
    config = parse_config(options.config);
  } catch (const ConfigError& e) {
    err << options.config.string() << ": " << e.what() << '\n';
    return kExitUsage;
  }
  if (options.out) config.output_dir = *options.out;
  if (options.seed) {
    config.pipeline.master_seed = *options.seed;
    if (cmd == "synth") config.synth_seed = *options.seed;
  }
  if (!config.mode_explicit)
    config.pipeline.mode = is_synthetic(config) ? SelectionMode::Clean : SelectionMode::Faithful;
  const std::size_t threads = options.threads ? options.threads : default_thread_count();

  if (cmd == "synth") {
    try {
      const auto set = generate_synthetic(config.synth, config.synth_seed);
      const auto manifest = write_trial_set(set, config.output_dir);
      log << "wrote " << set.size() << " trials to " << manifest.string() << '\n';
      return kExitOk;
    } catch (const std::exception& e) {
      err << "synth: " << e.what() << '\n';
      return kExitData;
    }
  }

  if ((cmd == "run-ss" || cmd == "run-si") && !is_synthetic(config) && config.channels.empty() &&
      !config.all_channels) {
    err << "data.channels must list the motor-cortex channels (or be 'all') for recorded data\n";
    return kExitUsage;
  }

  TrialSet set;
  std::vector<FeatureVector> features;
  try {
    set = load_configured_data(config);
    if (set.empty()) throw DataError("no trials");
    features = extract_features(set, config.pipeline, threads);
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }

  if (cmd == "ingest-check") {
    const auto& first = set.trials().front();
    log << "trials: " << set.size() << "\nsubjects: " << set.subjects().size()
        << "\nchannels: " << first.n_channels() << "\nsamples per trial: " << first.n_samples()
        << "\nsampling rate (Hz): " << first.sampling_rate_hz() << "\nfeatures per trial: "
        << features.front().size() << '\n';
    std::size_t left = 0;
    for (const auto& t : set.trials()) left += t.label() == Label::Left ? 1 : 0;
    log << "left: " << left << "\nright: " << set.size() - left << '\n';
    return kExitOk;
  }

  DesignRequest req;
  req.kind = cmd == "run-ss" ? Design::Kind::SubjectSpecific : Design::Kind::SubjectIndependent;
  req.algorithms = config.algorithms;
  req.sizes = cmd == "run-ss" ? config.ss_sizes : config.si_sizes;

  std::vector<std::string> subject_of;
  subject_of.reserve(set.size());
  for (const auto& t : set.trials()) subject_of.push_back(t.subject_id());

  std::vector<AccuracySummary> summaries;
  try {
    summaries = run_design(features, subject_of, req, config.pipeline, threads);
  } catch (const std::exception& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kExitEvaluation;
  }

  auto meta = config.snapshot();
  meta["run.subcommand"] = cmd;
  meta["run.tool_version"] = kToolVersion;
  meta["run.data_source"] = is_synthetic(config) ? "synthetic" : "manifest";
  meta["run.trial_format_version"] = std::to_string(kTrialFormatVersion);
  meta["run.csv_schema_version"] = "1";
  meta["run.std_convention"] = "sample (n-1)";
  meta["run.selection_mode"] = std::string(to_string(config.pipeline.mode));
  meta["run.seed_mixing"] = "splitmix64 fold of (master_seed, design, subject, algorithm, n, rep)";
  try {
    const auto files = write_reports(config.output_dir, summaries, meta);
    log << "wrote " << files.summary.string() << '\n';
  } catch (const std::exception& e) {
    err << "report error: " << e.what() << '\n';
    return kExitEvaluation;
  }

  int status = kExitOk;
  for (const auto& s : summaries)
    if (s.failed()) {
      err << "cell failed: " << s.cell.design.tag() << ' ' << s.cell.design.subject << ' '
          << to_string(s.cell.algorithm) << " n=" << s.cell.n << ": " << s.error << '\n';
      status = kExitEvaluation;
    }
  return status;
}

}  // namespace mibench
