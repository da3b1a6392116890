#include "mibench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mibench/parallel.hpp"

namespace mibench {

std::string_view to_string(SelectionMode m) { return m == SelectionMode::Faithful ? "faithful" : "clean"; }

std::vector<FeatureVector> extract_features(const TrialSet& set, const PipelineConfig& config,
                                            std::size_t threads) {
  std::vector<FeatureVector> out(set.size());
  if (set.empty()) return out;
  const FilterSpec filt =
      design_butterworth(config.filter_order, config.filter_low_hz, config.filter_high_hz,
                         set.trials().front().sampling_rate_hz());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    const Epoch raw = extract_mi_segment(set.trials()[i], set.protocol(), config.drop_head_s,
                                         config.drop_tail_s);
    out[i] = assemble_features(apply_bandpass(raw, filt), config.pooling);
  });
  return out;
}

namespace {

std::vector<std::size_t> rows_of(const LabeledSet& data, Label y) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data.label(i) == y) rows.push_back(i);
  return rows;
}

std::vector<FeatureVector> as_features(const LabeledSet& data) {
  std::vector<FeatureVector> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    out[i].values.assign(r.begin(), r.end());
    out[i].label = data.label(i);
  }
  return out;
}

LabeledSet project(const LabeledSet& data, const FeatureMask& mask) {
  if (data.dim() != mask.source_dim) throw SelectionError("mask dimensionality mismatch");
  LabeledSet out(mask.selected.size());
  std::vector<double> buf(mask.selected.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = r[mask.selected[k]];
    out.add(buf, data.label(i), data.id(i));
  }
  return out;
}

bool is_ss(const Design& d) { return d.kind == Design::Kind::SubjectSpecific; }

double threshold_for(const Design& d, const PipelineConfig& c) {
  return is_ss(d) ? c.p_threshold_ss : c.p_threshold_si;
}

ClassifierConfig classifier_for(const Design& d, const PipelineConfig& c) {
  ClassifierConfig cc = c.classifier;
  cc.lda_shrinkage = is_ss(d) ? c.lda_shrinkage_ss : c.lda_shrinkage_si;
  return cc;
}

std::vector<std::uint32_t> ids_of(const LabeledSet& s) {
  std::vector<std::uint32_t> ids(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) ids[i] = s.id(i);
  return ids;
}

}  // namespace

std::pair<LabeledSet, LabeledSet> split_half(const LabeledSet& data, Rng& rng) {
  if (data.size() < 2) throw EvaluationError("split_half needs at least 2 rows");
  std::vector<std::size_t> train_rows, test_rows;
  for (Label y : {Label::Right, Label::Left}) {
    auto rows = rows_of(data, y);
    rng.shuffle(std::span<std::size_t>(rows));
    const std::size_t n_train = (rows.size() + 1) / 2;
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_rows.insert(test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {data.subset(train_rows), data.subset(test_rows)};
}

std::pair<LabeledSet, LabeledSet> split_half(const LabeledSet& data, std::uint64_t seed) {
  Rng rng(seed);
  return split_half(data, rng);
}

LabeledSet subsample(const LabeledSet& train, std::size_t n, Rng& rng) {
  auto right = rows_of(train, Label::Right);
  auto left = rows_of(train, Label::Left);
  std::size_t n_right = n / 2;
  std::size_t n_left = n / 2;
  if (n % 2 == 1) (rng.below(2) == 0 ? n_right : n_left) += 1;
  if (n_right > right.size() || n_left > left.size())
    throw EvaluationError("subsample of n = " + std::to_string(n) + " needs " + std::to_string(n_right) +
                          "/" + std::to_string(n_left) + " rows per class, training half has " +
                          std::to_string(right.size()) + "/" + std::to_string(left.size()));

  // Partial Fisher-Yates: the first m entries become a uniform draw.
  auto draw = [&](std::vector<std::size_t>& rows, std::size_t m) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + rng.below(rows.size() - i);
      std::swap(rows[i], rows[j]);
    }
    rows.resize(m);
  };
  draw(right, n_right);
  draw(left, n_left);
  std::vector<std::size_t> rows(right);
  rows.insert(rows.end(), left.begin(), left.end());
  std::sort(rows.begin(), rows.end());
  return train.subset(rows);
}

LabeledSet subsample(const LabeledSet& train, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return subsample(train, n, rng);
}

std::uint64_t stream_seed(const ExperimentCell& cell, std::size_t rep) {
  return mix_seed({cell.master_seed, hash_tag(cell.design.tag()), hash_tag(cell.design.subject),
                   hash_tag(to_string(cell.algorithm)), cell.n, rep});
}

double run_repetition(const LabeledSet& data, const ExperimentCell& cell, std::size_t rep,
                      const PipelineConfig& config, const std::optional<FeatureMask>& fixed_mask,
                      RepetitionTrace* trace) {
  Rng rng(stream_seed(cell, rep));
  auto [train_half, test] =
      config.fixed_split
          ? split_half(data, mix_seed({cell.master_seed, hash_tag(cell.design.tag()),
                                       hash_tag(cell.design.subject), hash_tag("split")}))
          : split_half(data, rng);

  const FeatureMask mask = fixed_mask ? *fixed_mask
                                      : select_features(as_features(train_half),
                                                        threshold_for(cell.design, config));
  const LabeledSet sub = subsample(train_half, cell.n, rng);
  const LabeledSet sub_m = project(sub, mask);
  const LabeledSet test_m = project(test, mask);

  const TrainedModel model = train(cell.algorithm, sub_m, classifier_for(cell.design, config));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test_m.size(); ++i)
    correct += predict(model, test_m.row(i)) == test_m.label(i) ? 1 : 0;

  if (trace) {
    trace->train_ids = ids_of(sub);
    trace->test_ids = ids_of(test);
    trace->train_half_ids = ids_of(train_half);
    trace->mask = mask.selected;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(test_m.size());
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

namespace {

void finalize(AccuracySummary& s, double max_failure_fraction) {
  s.accuracies.clear();
  s.failures = 0;
  for (const auto& a : s.per_rep) {
    if (a) s.accuracies.push_back(*a);
    else ++s.failures;
  }
  std::tie(s.mean, s.std) = mean_std(s.accuracies);
  if (s.error.empty() &&
      static_cast<double>(s.failures) > max_failure_fraction * static_cast<double>(s.per_rep.size()))
    s.error = std::to_string(s.failures) + " of " + std::to_string(s.per_rep.size()) +
              " repetitions failed";
}

std::optional<FeatureMask> faithful_mask(const LabeledSet& data, const Design& design,
                                         const PipelineConfig& config) {
  if (config.mode != SelectionMode::Faithful) return std::nullopt;
  return select_features(as_features(data), threshold_for(design, config));
}

void validate_cell(const LabeledSet& data, const ExperimentCell& cell) {
  if (cell.repetitions == 0) throw EvaluationError("repetitions must be positive");
  if (cell.n < 2) throw EvaluationError("training size n must be at least 2");
  const std::size_t half = (data.count(Label::Right) + 1) / 2 + (data.count(Label::Left) + 1) / 2;
  if (cell.n > half)
    throw EvaluationError(cell.design.tag() + (cell.design.subject.empty() ? "" : " " + cell.design.subject) +
                          ": n = " + std::to_string(cell.n) + " exceeds the training half of " +
                          std::to_string(half));
}

}  // namespace

AccuracySummary run_cell(const LabeledSet& data, const ExperimentCell& cell, const PipelineConfig& config,
                         std::size_t threads) {
  validate_cell(data, cell);
  AccuracySummary s;
  s.cell = cell;
  s.mode = config.mode;
  s.per_rep.resize(cell.repetitions);
  const auto mask = faithful_mask(data, cell.design, config);
  parallel_for(cell.repetitions, threads, [&](std::size_t r) {
    try {
      s.per_rep[r] = run_repetition(data, cell, r, config, mask);
    } catch (const TrainingError&) {
      s.per_rep[r].reset();
    }
  });
  finalize(s, config.max_failure_fraction);
  if (s.failed()) throw EvaluationError(s.error);
  return s;
}

std::vector<AccuracySummary> run_design(const std::vector<FeatureVector>& features,
                                        const std::vector<std::string>& subject_of,
                                        const DesignRequest& request, const PipelineConfig& config,
                                        std::size_t threads) {
  if (features.size() != subject_of.size())
    throw EvaluationError("features and subject list differ in length");
  if (request.sizes.empty() || request.algorithms.empty())
    throw EvaluationError("design needs at least one size and one algorithm");

  // Groups: one per subject for SS, a single pooled group for SI.
  struct Group {
    Design design;
    LabeledSet data;
    std::optional<FeatureMask> mask;
    std::string mask_error;
  };
  std::vector<Group> groups;
  if (request.kind == Design::Kind::SubjectSpecific) {
    std::vector<std::string> order;
    for (const auto& s : subject_of)
      if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
    for (const auto& subj : order) {
      Group g{Design::ss(subj), LabeledSet(features.front().size()), std::nullopt, {}};
      for (std::size_t i = 0; i < features.size(); ++i)
        if (subject_of[i] == subj) g.data.add(features[i].values, features[i].label, static_cast<std::uint32_t>(i));
      groups.push_back(std::move(g));
    }
  } else {
    Group g{Design::si(), LabeledSet(features.empty() ? 0 : features.front().size()), std::nullopt, {}};
    for (std::size_t i = 0; i < features.size(); ++i)
      g.data.add(features[i].values, features[i].label, static_cast<std::uint32_t>(i));
    groups.push_back(std::move(g));
  }

  std::vector<AccuracySummary> out;
  std::vector<std::size_t> group_of;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    for (auto n : request.sizes) {
      ExperimentCell probe{g.design, Algorithm::Lda, n, config.reps, config.master_seed};
      validate_cell(g.data, probe);
    }
    try {
      g.mask = faithful_mask(g.data, g.design, config);
    } catch (const std::exception& e) {
      g.mask_error = e.what();
    }
    for (auto alg : request.algorithms)
      for (auto n : request.sizes) {
        AccuracySummary s;
        s.cell = {g.design, alg, n, config.reps, config.master_seed};
        s.mode = config.mode;
        s.per_rep.resize(config.reps);
        s.error = g.mask_error;
        out.push_back(std::move(s));
        group_of.push_back(gi);
      }
  }

  // Flatten (cell, rep) so that every slot is an independent work item.
  const std::size_t reps = config.reps;
  parallel_for(out.size() * reps, threads, [&](std::size_t task) {
    const std::size_t ci = task / reps;
    const std::size_t r = task % reps;
    auto& s = out[ci];
    if (!s.error.empty()) return;
    const auto& g = groups[group_of[ci]];
    try {
      s.per_rep[r] = run_repetition(g.data, s.cell, r, config, g.mask);
    } catch (const TrainingError&) {
      s.per_rep[r].reset();
    }
  });
  for (auto& s : out) finalize(s, config.max_failure_fraction);
  return out;
}

}  // namespace mibench
