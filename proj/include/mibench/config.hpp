#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mibench/data_model.hpp"
#include "mibench/evaluation.hpp"

namespace mibench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // data
  std::filesystem::path manifest;       // empty: generate synthetic data in memory
  std::vector<std::string> channels;    // empty: not configured
  bool all_channels = false;            // data.channels = all
  ProtocolTiming protocol;
  // pipeline, classifiers and protocol settings
  PipelineConfig pipeline;
  bool mode_explicit = false;  // select.mode given; otherwise faithful for files, clean for synthetic
  std::vector<std::size_t> ss_sizes{10, 15, 20};
  std::vector<std::size_t> si_sizes{100, 150, 200, 250, 300, 350, 400};
  std::vector<Algorithm> algorithms{Algorithm::Lda, Algorithm::Svm, Algorithm::Cart, Algorithm::Knn};
  // synthetic data
  SyntheticSpec synth;
  std::uint64_t synth_seed = 1;
  // output
  std::filesystem::path output_dir = "mibench_out";

  /// Effective value of every key, in key order, for run metadata.
  std::map<std::string, std::string> snapshot() const;
};

/// Line-based `key = value`, `#` starts a comment, later keys win.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig parse_config(const std::filesystem::path& path);

/// Every recognised key, sorted.
std::vector<std::string> config_keys();

}  // namespace mibench
