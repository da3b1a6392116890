#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mibench {

/// Thrown for anything wrong with on-disk trial data or manifests.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right hand imagery is class 0, left hand imagery is class 1.
enum class Label : int { Right = 0, Left = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
Label label_from_string(std::string_view s);  // "left"/"right", any case
std::string_view to_string(Label l);

struct ProtocolTiming {
  double cue_s = 3.0;
  double task_s = 4.0;
  double rest_s = 6.0;
  // Stored window starts at cue onset (t = 0) and covers cue + task.
  double window_start_s = 0.0;
  double window_end_s = 7.0;

  double task_start_s() const { return cue_s; }
  double task_end_s() const { return cue_s + task_s; }
  void validate() const;
};

/// One labeled multi-channel trial. Samples are channel-major f32, exactly
/// as they sit in the trial file.
class TrialRecording {
 public:
  TrialRecording(std::string subject_id, std::uint32_t trial_index, Label label,
                 double sampling_rate_hz, std::vector<std::string> channel_names,
                 std::size_t n_samples, std::vector<float> samples);

  const std::string& subject_id() const { return subject_id_; }
  std::uint32_t trial_index() const { return trial_index_; }
  Label label() const { return label_; }
  double sampling_rate_hz() const { return sampling_rate_hz_; }
  const std::vector<std::string>& channel_names() const { return channel_names_; }
  std::size_t n_channels() const { return channel_names_.size(); }
  std::size_t n_samples() const { return n_samples_; }
  const std::vector<float>& samples() const { return samples_; }

  std::span<const float> channel(std::size_t c) const {
    return {samples_.data() + c * n_samples_, n_samples_};
  }

  bool operator==(const TrialRecording&) const = default;

 private:
  std::string subject_id_;
  std::uint32_t trial_index_;
  Label label_;
  double sampling_rate_hz_;
  std::vector<std::string> channel_names_;
  std::size_t n_samples_;
  std::vector<float> samples_;
};

class TrialSet {
 public:
  TrialSet() = default;
  TrialSet(std::vector<TrialRecording> trials, ProtocolTiming protocol);

  const std::vector<TrialRecording>& trials() const { return trials_; }
  const ProtocolTiming& protocol() const { return protocol_; }
  std::size_t size() const { return trials_.size(); }
  bool empty() const { return trials_.empty(); }

  /// Distinct subject ids in first-appearance order.
  std::vector<std::string> subjects() const;

 private:
  std::vector<TrialRecording> trials_;
  ProtocolTiming protocol_;
};

inline constexpr std::string_view kTrialMagic = "MIEEG1";
inline constexpr std::uint16_t kTrialFormatVersion = 1;

TrialRecording read_trial_file(const std::filesystem::path& path, std::string subject_id,
                               std::uint32_t trial_index, Label label);
void write_trial_file(const std::filesystem::path& path, const TrialRecording& trial);

TrialSet load_trial_set(const std::filesystem::path& manifest_path,
                        const ProtocolTiming& protocol = {});

/// Writes one binary file per trial plus `manifest.csv` into `dir`.
/// Returns the manifest path.
std::filesystem::path write_trial_set(const TrialSet& set, const std::filesystem::path& dir);

TrialSet select_channels(const TrialSet& set, const std::vector<std::string>& keep);

struct SyntheticSpec {
  std::size_t n_subjects = 20;
  std::size_t trials_per_class = 20;  // per subject
  std::size_t n_channels = 20;
  double duration_s = 7.0;
  double sampling_rate_hz = 250.0;
  double noise_std = 1.0;
  // Left trials carry an extra sinusoid of this amplitude on the contrast channels.
  double contrast_amplitude = 3.0;
  double contrast_hz = 10.0;
  std::vector<std::size_t> contrast_channels{0, 1};
  // Class-independent rhythm at contrast_hz on the contrast channels, with a
  // per-trial amplitude drawn from |N(mean, std)|. Sets how much the classes overlap.
  double background_amplitude_mean = 0.0;
  double background_amplitude_std = 0.0;
  // Per-subject multiplicative gain drawn from N(1, std) (clamped positive).
  double subject_gain_std = 0.0;
  // Fixed per-channel recording gain exp(N(0, std)), shared by every trial.
  double channel_gain_log_std = 0.0;

  void validate() const;
};

/// Deterministic for a fixed (spec, seed). Channels are named CH01, CH02, ...
TrialSet generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace mibench
