#include "mibench/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mibench {

using cd = std::complex<double>;

Epoch extract_mi_segment(const TrialRecording& trial, const ProtocolTiming& protocol,
                         double drop_head_s, double drop_tail_s) {
  if (drop_head_s < 0 || drop_tail_s < 0)
    throw PreprocessError("segment drops must be non-negative");
  if (!(protocol.task_s > drop_head_s + drop_tail_s))
    throw PreprocessError("segment drops (" + std::to_string(drop_head_s) + " + " +
                          std::to_string(drop_tail_s) + " s) leave no data in a " +
                          std::to_string(protocol.task_s) + " s task window");

  const double fs = trial.sampling_rate_hz();
  const double start_s = protocol.task_start_s() + drop_head_s - protocol.window_start_s;
  const double length_s = protocol.task_s - drop_head_s - drop_tail_s;
  const auto first = static_cast<std::size_t>(std::lround(start_s * fs));
  const auto count = static_cast<std::size_t>(std::lround(length_s * fs));
  if (start_s < 0 || first + count > trial.n_samples())
    throw PreprocessError("trial holds " + std::to_string(trial.n_samples()) +
                          " samples, segment needs [" + std::to_string(first) + ", " +
                          std::to_string(first + count) + ")");

  Epoch e;
  e.label = trial.label();
  e.subject_id = trial.subject_id();
  e.trial_index = trial.trial_index();
  e.sampling_rate_hz = fs;
  e.channel_names = trial.channel_names();
  e.n_samples = count;
  e.samples.resize(trial.n_channels() * count);
  for (std::size_t c = 0; c < trial.n_channels(); ++c) {
    const auto src = trial.channel(c).subspan(first, count);
    std::copy(src.begin(), src.end(), e.channel(c).begin());
  }
  return e;
}

namespace {

cd section_response(const Biquad& s, cd z) {
  const cd zi = 1.0 / z;
  const cd num = s.b0 + s.b1 * zi + s.b2 * zi * zi;
  const cd den = 1.0 + s.a1 * zi + s.a2 * zi * zi;
  return num / den;
}

cd unit_circle(double freq_hz, double fs) {
  return std::polar(1.0, 2.0 * std::numbers::pi * freq_hz / fs);
}

}  // namespace

cd FilterSpec::response(double freq_hz) const {
  const cd z = unit_circle(freq_hz, sampling_rate_hz);
  cd h = 1.0;
  for (const auto& s : sections) h *= section_response(s, z);
  return h;
}

std::vector<cd> FilterSpec::poles() const {
  std::vector<cd> out;
  for (const auto& s : sections) {
    // z^2 + a1 z + a2 = 0
    const cd disc = std::sqrt(cd(s.a1 * s.a1 - 4.0 * s.a2));
    out.push_back((-s.a1 + disc) / 2.0);
    out.push_back((-s.a1 - disc) / 2.0);
  }
  return out;
}

FilterSpec design_butterworth(int order, double low_hz, double high_hz, double fs) {
  if (order < 1) throw PreprocessError("filter order must be at least 1");
  if (!(fs > 0)) throw PreprocessError("sampling rate must be positive");
  if (!(low_hz > 0 && low_hz < high_hz && high_hz < fs / 2))
    throw PreprocessError("band edges must satisfy 0 < low < high < fs/2");

  const double pi = std::numbers::pi;
  const double w_lo = 2.0 * fs * std::tan(pi * low_hz / fs);
  const double w_hi = 2.0 * fs * std::tan(pi * high_hz / fs);
  const double bw = w_hi - w_lo;
  const double w0 = std::sqrt(w_lo * w_hi);

  // Analog band-pass poles from the unit-cutoff prototype, then bilinear map.
  std::vector<cd> complex_poles;
  std::vector<double> real_poles;
  for (int k = 0; k < order; ++k) {
    const cd p = std::polar(1.0, pi * (2.0 * k + order + 1) / (2.0 * order));
    const cd half = p * bw / 2.0;
    const cd root = std::sqrt(half * half - w0 * w0);
    for (const cd s : {half + root, half - root}) {
      const cd z = (2.0 * fs + s) / (2.0 * fs - s);
      if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z)))
        real_poles.push_back(z.real());
      else if (z.imag() > 0)
        complex_poles.push_back(z);
    }
  }
  std::sort(real_poles.begin(), real_poles.end());
  if (real_poles.size() % 2 != 0 || complex_poles.size() + real_poles.size() / 2 !=
                                        static_cast<std::size_t>(order))
    throw PreprocessError("internal: unexpected pole layout in band-pass design");

  FilterSpec f;
  f.order = order;
  f.low_cut_hz = low_hz;
  f.high_cut_hz = high_hz;
  f.sampling_rate_hz = fs;

  // Each section carries one zero at z = 1 and one at z = -1.
  auto add_section = [&](double a1, double a2) { f.sections.push_back({1.0, 0.0, -1.0, a1, a2}); };
  for (const cd& z : complex_poles) add_section(-2.0 * z.real(), std::norm(z));
  for (std::size_t i = 0; i < real_poles.size(); i += 2)
    add_section(-(real_poles[i] + real_poles[i + 1]), real_poles[i] * real_poles[i + 1]);

  // The analog centre w0 maps to this digital frequency; unit gain there.
  const double centre_hz = fs / pi * std::atan(w0 / (2.0 * fs));
  const cd zc = unit_circle(centre_hz, fs);
  for (auto& s : f.sections) {
    const double g = 1.0 / std::abs(section_response(s, zc));
    s.b0 *= g;
    s.b1 *= g;
    s.b2 *= g;
  }
  return f;
}

void sos_filter(const FilterSpec& filt, std::span<double> x, std::span<double> state) {
  for (std::size_t k = 0; k < filt.sections.size(); ++k) {
    const Biquad& s = filt.sections[k];
    double z1 = state[2 * k];
    double z2 = state[2 * k + 1];
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
    state[2 * k] = z1;
    state[2 * k + 1] = z2;
  }
}

std::vector<double> sos_step_state(const FilterSpec& filt) {
  std::vector<double> zi(2 * filt.sections.size());
  double u = 1.0;  // constant input reaching the current section
  for (std::size_t k = 0; k < filt.sections.size(); ++k) {
    const Biquad& s = filt.sections[k];
    const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double y = dc * u;
    zi[2 * k] = y - s.b0 * u;
    zi[2 * k + 1] = s.b2 * u - s.a2 * y;
    u = y;
  }
  return zi;
}

std::vector<double> filtfilt(const FilterSpec& filt, std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t pad = 3 * static_cast<std::size_t>(filt.order);
  if (n <= pad)
    throw PreprocessError("signal of " + std::to_string(n) + " samples is too short for edge padding of " +
                          std::to_string(pad));

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto zi = sos_step_state(filt);
  std::vector<double> state(zi.size());

  const double first = ext.front();
  std::transform(zi.begin(), zi.end(), state.begin(), [&](double v) { return v * first; });
  sos_filter(filt, ext, state);

  std::reverse(ext.begin(), ext.end());
  const double last = ext.front();
  std::transform(zi.begin(), zi.end(), state.begin(), [&](double v) { return v * last; });
  sos_filter(filt, ext, state);
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

Epoch apply_bandpass(const Epoch& epoch, const FilterSpec& filt) {
  if (epoch.sampling_rate_hz != filt.sampling_rate_hz)
    throw PreprocessError("epoch sampling rate " + std::to_string(epoch.sampling_rate_hz) +
                          " Hz differs from filter design rate " +
                          std::to_string(filt.sampling_rate_hz) + " Hz");
  Epoch out = epoch;
  for (std::size_t c = 0; c < epoch.n_channels(); ++c) {
    const auto y = filtfilt(filt, epoch.channel(c));
    std::copy(y.begin(), y.end(), out.channel(c).begin());
  }
  return out;
}

}  // namespace mibench
