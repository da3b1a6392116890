#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mibench/classifiers.hpp"
#include "mibench/data_model.hpp"
#include "mibench/feature_select.hpp"
#include "mibench/preprocess.hpp"
#include "mibench/random.hpp"
#include "mibench/spectral.hpp"

namespace mibench {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SelectionMode { Faithful, Clean };
std::string_view to_string(SelectionMode m);

struct PipelineConfig {
  // segment
  double drop_head_s = 1.0;
  double drop_tail_s = 0.5;
  // filter
  int filter_order = 4;
  double filter_low_hz = 3.0;
  double filter_high_hz = 35.0;
  // features
  PoolingConfig pooling;
  // selection
  double p_threshold_ss = 0.05;
  double p_threshold_si = 0.005;
  SelectionMode mode = SelectionMode::Clean;
  // classifiers; lda_shrinkage in here is ignored in favour of the per-design values
  ClassifierConfig classifier;
  double lda_shrinkage_ss = 0.1;
  double lda_shrinkage_si = 0.01;
  // protocol
  std::size_t reps = 100;
  std::uint64_t master_seed = 20200101;
  bool fixed_split = false;
  double max_failure_fraction = 0.10;
};

/// Segment, band-pass and periodogram features for every trial, in set order.
std::vector<FeatureVector> extract_features(const TrialSet& set, const PipelineConfig& config,
                                            std::size_t threads = 1);

/// Stratified 50/50 split; an odd class count gives the extra point to training.
/// Both halves keep the input row order.
std::pair<LabeledSet, LabeledSet> split_half(const LabeledSet& data, Rng& rng);
std::pair<LabeledSet, LabeledSet> split_half(const LabeledSet& data, std::uint64_t seed);

/// n/2 rows per class without replacement, in input row order. For odd n the
/// extra row goes to a class chosen by a fair coin from the same stream.
LabeledSet subsample(const LabeledSet& train, std::size_t n, Rng& rng);
LabeledSet subsample(const LabeledSet& train, std::size_t n, std::uint64_t seed);

struct Design {
  enum class Kind { SubjectSpecific, SubjectIndependent } kind = Kind::SubjectIndependent;
  std::string subject;  // empty for SI

  std::string tag() const { return kind == Kind::SubjectSpecific ? "SS" : "SI"; }
  static Design ss(std::string subject) { return {Kind::SubjectSpecific, std::move(subject)}; }
  static Design si() { return {Kind::SubjectIndependent, {}}; }
};

struct ExperimentCell {
  Design design;
  Algorithm algorithm = Algorithm::Lda;
  std::size_t n = 0;
  std::size_t repetitions = 100;
  std::uint64_t master_seed = 0;
};

/// Seed of one repetition's random stream; independent of execution order.
std::uint64_t stream_seed(const ExperimentCell& cell, std::size_t rep);

struct AccuracySummary {
  ExperimentCell cell;
  std::vector<std::optional<double>> per_rep;  // empty slot = failed repetition
  std::vector<double> accuracies;              // successful repetitions, rep order
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  std::size_t failures = 0;
  std::string error;  // non-empty when the whole cell failed
  SelectionMode mode = SelectionMode::Clean;

  bool failed() const { return !error.empty(); }
};

/// Trial identities of one repetition, for leakage checks.
struct RepetitionTrace {
  std::vector<std::uint32_t> train_ids;  // the subsample actually trained on
  std::vector<std::uint32_t> test_ids;
  std::vector<std::uint32_t> train_half_ids;
  std::vector<std::size_t> mask;
};

/// Runs one repetition; throws TrainingError / SelectionError on failure.
double run_repetition(const LabeledSet& data, const ExperimentCell& cell, std::size_t rep,
                      const PipelineConfig& config, const std::optional<FeatureMask>& fixed_mask,
                      RepetitionTrace* trace = nullptr);

/// Sample mean and n-1 standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& v);

AccuracySummary run_cell(const LabeledSet& data, const ExperimentCell& cell,
                         const PipelineConfig& config, std::size_t threads = 1);

struct DesignRequest {
  Design::Kind kind = Design::Kind::SubjectIndependent;
  std::vector<Algorithm> algorithms{Algorithm::Lda, Algorithm::Svm, Algorithm::Cart, Algorithm::Knn};
  std::vector<std::size_t> sizes;
};

/// Every (subject if SS) x algorithm x size cell, in that nesting order.
/// Cells that exceed the failure budget are returned with `error` set.
std::vector<AccuracySummary> run_design(const std::vector<FeatureVector>& features,
                                        const std::vector<std::string>& subject_of,
                                        const DesignRequest& request, const PipelineConfig& config,
                                        std::size_t threads = 1);

}  // namespace mibench
