#pragma once

#include <numeric>

#include "mibench/data_model.hpp"

// The standard synthetic fixture; configs/synthetic.conf spells out the same values.
inline mibench::SyntheticSpec standard_fixture_spec(double contrast = 3.0) {
  mibench::SyntheticSpec s;
  s.n_subjects = 20;
  s.trials_per_class = 20;
  s.n_channels = 40;
  s.duration_s = 7.0;
  s.sampling_rate_hz = 250.0;
  s.noise_std = 1.0;
  s.contrast_amplitude = contrast;
  s.contrast_hz = 10.0;
  s.contrast_channels.resize(40);
  std::iota(s.contrast_channels.begin(), s.contrast_channels.end(), std::size_t{0});
  s.background_amplitude_mean = 6.0;
  s.background_amplitude_std = 4.5;
  s.channel_gain_log_std = 0.75;
  return s;
}

inline constexpr std::uint64_t kFixtureSeed = 1;
