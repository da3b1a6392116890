#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mibench/data_model.hpp"

namespace mibench {

class PreprocessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cropped trial segment, channel-major doubles.
struct Epoch {
  Label label = Label::Right;
  std::string subject_id;
  std::uint32_t trial_index = 0;
  double sampling_rate_hz = 0.0;
  std::vector<std::string> channel_names;
  std::size_t n_samples = 0;
  std::vector<double> samples;

  std::size_t n_channels() const { return channel_names.size(); }
  std::span<const double> channel(std::size_t c) const {
    return {samples.data() + c * n_samples, n_samples};
  }
  std::span<double> channel(std::size_t c) { return {samples.data() + c * n_samples, n_samples}; }
};

/// Crops [task_start + drop_head_s, task_end - drop_tail_s) out of the stored window.
Epoch extract_mi_segment(const TrialRecording& trial, const ProtocolTiming& protocol,
                         double drop_head_s, double drop_tail_s);

/// Biquad y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2].
struct Biquad {
  double b0, b1, b2, a1, a2;
};

struct FilterSpec {
  int order = 0;  // prototype order; the band-pass has 2*order poles in `order` sections
  double low_cut_hz = 0.0;
  double high_cut_hz = 0.0;
  double sampling_rate_hz = 0.0;
  std::vector<Biquad> sections;

  std::complex<double> response(double freq_hz) const;
  double magnitude(double freq_hz) const { return std::abs(response(freq_hz)); }
  std::vector<std::complex<double>> poles() const;
};

/// Digital Butterworth band-pass: analog prototype, low-pass to band-pass
/// transform, bilinear transform with both edges pre-warped. |H| = 1/sqrt(2)
/// at each cut-off and unity at the warped centre frequency.
FilterSpec design_butterworth(int order, double low_hz, double high_hz, double fs);

/// Runs the cascade once, causally, from the given per-section states
/// (two delay elements per section, direct form II transposed).
void sos_filter(const FilterSpec& filt, std::span<double> x, std::span<double> state);

/// Steady-state section states for a unit step input (scale by the first sample).
std::vector<double> sos_step_state(const FilterSpec& filt);

/// Zero-phase forward-backward filtering of one channel with odd extension of
/// 3*order samples at each end.
std::vector<double> filtfilt(const FilterSpec& filt, std::span<const double> x);

Epoch apply_bandpass(const Epoch& epoch, const FilterSpec& filt);

}  // namespace mibench
