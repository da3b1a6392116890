#include "mibench/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace mibench {

namespace {

// FFTW planning is not thread-safe; execution on fresh aligned buffers is.
// Plans are created once per length and live for the process.
class PlanCache {
 public:
  fftw_plan get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

SpectrumEstimate periodogram(std::span<const double> x, double fs) {
  const std::size_t n = x.size();
  if (n < 2) throw SpectralError("periodogram needs at least 2 samples");
  if (!(fs > 0)) throw SpectralError("sampling rate must be positive");
  for (double v : x)
    if (!std::isfinite(v)) throw SpectralError("periodogram input contains non-finite values");

  std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwDeleter> out(fftw_alloc_complex(n / 2 + 1));
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(plan_cache().get(n), in.get(), out.get());

  // dt / T = 1 / N.
  SpectrumEstimate s;
  s.n_samples = n;
  s.bin_hz = fs / static_cast<double>(n);
  s.values.resize(n / 2 + 1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double re = out.get()[k][0];
    const double im = out.get()[k][1];
    s.values[k] = (re * re + im * im) * scale;
  }
  return s;
}

std::pair<std::size_t, std::size_t> band_bins(const SpectrumEstimate& spec, double low_hz,
                                              double high_hz) {
  const double nyquist = spec.bin_hz * static_cast<double>(spec.n_samples) / 2.0;
  if (low_hz < 0 || high_hz > nyquist * (1 + 1e-12) || low_hz > high_hz)
    throw SpectralError("pooling band must satisfy 0 <= low <= high <= fs/2");
  // Frequencies are k * bin_hz; a relative slack absorbs rounding at exact edges.
  const double slack = 1e-9;
  const auto first = static_cast<std::size_t>(std::ceil(low_hz / spec.bin_hz - slack));
  const double hi = std::floor(high_hz / spec.bin_hz + slack);
  const auto last = std::min(static_cast<std::size_t>(hi), spec.values.size() - 1);
  if (hi < 0 || first > last)
    throw SpectralError("pooling band [" + std::to_string(low_hz) + ", " + std::to_string(high_hz) +
                        "] Hz selects no periodogram bins");
  return {first, last};
}

std::vector<double> pool_max(const SpectrumEstimate& spec, double band_low_hz, double band_high_hz,
                             std::size_t window_bins) {
  if (window_bins == 0) throw SpectralError("pooling window must be at least 1 bin");
  const auto [first, last] = band_bins(spec, band_low_hz, band_high_hz);
  const std::size_t count = last - first + 1;
  std::vector<double> out;
  out.reserve(count / window_bins);
  for (std::size_t w = 0; w + 1 <= count / window_bins; ++w) {
    const auto begin = spec.values.begin() + static_cast<std::ptrdiff_t>(first + w * window_bins);
    out.push_back(*std::max_element(begin, begin + static_cast<std::ptrdiff_t>(window_bins)));
  }
  return out;
}

FeatureVector assemble_features(const Epoch& epoch, const PoolingConfig& pooling) {
  FeatureVector fv;
  fv.label = epoch.label;
  for (std::size_t c = 0; c < epoch.n_channels(); ++c) {
    const auto spec = periodogram(epoch.channel(c), epoch.sampling_rate_hz);
    const auto pooled = pool_max(spec, pooling.band_low_hz, pooling.band_high_hz, pooling.window_bins);
    const auto first = band_bins(spec, pooling.band_low_hz, pooling.band_high_hz).first;
    for (std::size_t w = 0; w < pooled.size(); ++w) {
      const std::size_t lo = first + w * pooling.window_bins;
      fv.values.push_back(pooled[w]);
      fv.feature_names.push_back(epoch.channel_names[c] + ":" + std::to_string(lo) + "-" +
                                 std::to_string(lo + pooling.window_bins - 1));
    }
  }
  return fv;
}

}  // namespace mibench
