#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mibench/data_model.hpp"
#include "mibench/preprocess.hpp"

namespace mibench {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One-sided periodogram: values[k] for k = 0..N/2 at frequency k * bin_hz.
struct SpectrumEstimate {
  std::vector<double> values;
  double bin_hz = 0.0;
  std::size_t n_samples = 0;

  double frequency(std::size_t k) const { return static_cast<double>(k) * bin_hz; }
};

/// S(w_k) = (dt / T) |sum_n x[n] exp(-i w_k n dt)|^2 with T = N dt, evaluated at
/// the DFT frequencies. Rectangular window, no detrending, no zero padding.
SpectrumEstimate periodogram(std::span<const double> x, double fs);

/// Bin indices [first, last] whose frequency lies inside [low_hz, high_hz].
std::pair<std::size_t, std::size_t> band_bins(const SpectrumEstimate& spec, double low_hz,
                                              double high_hz);

/// Maximum over consecutive, non-overlapping runs of `window_bins` in-band bins.
/// A trailing partial run is dropped.
std::vector<double> pool_max(const SpectrumEstimate& spec, double band_low_hz, double band_high_hz,
                             std::size_t window_bins);

struct PoolingConfig {
  double band_low_hz = 3.0;
  double band_high_hz = 35.0;
  std::size_t window_bins = 10;
};

struct FeatureVector {
  std::vector<double> values;
  Label label = Label::Right;
  std::vector<std::string> feature_names;  // "CH:first-last" in bin indices

  std::size_t size() const { return values.size(); }
};

FeatureVector assemble_features(const Epoch& epoch, const PoolingConfig& pooling);

}  // namespace mibench
