#include "mibench/data_model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "mibench/random.hpp"

namespace mibench {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little,
              "trial file I/O assumes a little-endian host");

Label label_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "left") return Label::Left;
  if (lower == "right") return Label::Right;
  throw DataError("unknown label '" + std::string(s) + "' (expected left/right)");
}

std::string_view to_string(Label l) { return l == Label::Left ? "left" : "right"; }

void ProtocolTiming::validate() const {
  if (!(cue_s > 0 && task_s > 0 && rest_s > 0))
    throw DataError("protocol durations must be positive");
  if (!(window_end_s > window_start_s))
    throw DataError("protocol window must have positive length");
}

TrialRecording::TrialRecording(std::string subject_id, std::uint32_t trial_index, Label label,
                               double sampling_rate_hz, std::vector<std::string> channel_names,
                               std::size_t n_samples, std::vector<float> samples)
    : subject_id_(std::move(subject_id)),
      trial_index_(trial_index),
      label_(label),
      sampling_rate_hz_(sampling_rate_hz),
      channel_names_(std::move(channel_names)),
      n_samples_(n_samples),
      samples_(std::move(samples)) {
  if (!(sampling_rate_hz_ > 0) || !std::isfinite(sampling_rate_hz_))
    throw DataError("sampling rate must be positive");
  if (samples_.size() != channel_names_.size() * n_samples_)
    throw DataError("sample count does not match channels x samples");
}

TrialSet::TrialSet(std::vector<TrialRecording> trials, ProtocolTiming protocol)
    : trials_(std::move(trials)), protocol_(protocol) {
  protocol_.validate();
  if (trials_.empty()) return;
  const auto& first = trials_.front();
  std::map<std::string, std::set<std::uint32_t>> seen;
  for (const auto& t : trials_) {
    if (t.sampling_rate_hz() != first.sampling_rate_hz())
      throw DataError("trials disagree on sampling rate");
    if (t.channel_names() != first.channel_names())
      throw DataError("trials disagree on channel names");
    if (!seen[t.subject_id()].insert(t.trial_index()).second)
      throw DataError("duplicate trial_index " + std::to_string(t.trial_index()) +
                      " for subject " + t.subject_id());
  }
}

std::vector<std::string> TrialSet::subjects() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : trials_)
    if (seen.insert(t.subject_id()).second) out.push_back(t.subject_id());
  return out;
}

namespace {

template <typename T>
T read_le(std::istream& in, const fs::path& path, const char* what) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw DataError(path.string() + ": truncated while reading " + what);
  return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

TrialRecording read_trial_file(const fs::path& path, std::string subject_id,
                               std::uint32_t trial_index, Label label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open trial file " + path.string());

  char magic[6];
  if (!in.read(magic, sizeof magic) || std::string_view(magic, 6) != kTrialMagic)
    throw DataError(path.string() + ": bad magic (expected MIEEG1)");
  const auto version = read_le<std::uint16_t>(in, path, "version");
  if (version != kTrialFormatVersion)
    throw DataError(path.string() + ": unsupported format version " + std::to_string(version));
  const auto n_channels = read_le<std::uint32_t>(in, path, "n_channels");
  const auto n_samples = read_le<std::uint32_t>(in, path, "n_samples");
  const auto fs_hz = read_le<double>(in, path, "sampling rate");
  if (n_channels == 0) throw DataError(path.string() + ": zero channels");

  std::vector<std::string> names;
  names.reserve(n_channels);
  for (std::uint32_t c = 0; c < n_channels; ++c) {
    std::string name;
    if (!std::getline(in, name, '\0'))
      throw DataError(path.string() + ": truncated channel name table");
    names.push_back(std::move(name));
  }

  std::vector<float> samples(static_cast<std::size_t>(n_channels) * n_samples);
  const auto bytes = static_cast<std::streamsize>(samples.size() * sizeof(float));
  if (!in.read(reinterpret_cast<char*>(samples.data()), bytes))
    throw DataError(path.string() + ": fewer samples than header declares");
  if (in.peek() != std::char_traits<char>::eof())
    throw DataError(path.string() + ": trailing bytes after sample block");

  return TrialRecording(std::move(subject_id), trial_index, label, fs_hz, std::move(names),
                        n_samples, std::move(samples));
}

void write_trial_file(const fs::path& path, const TrialRecording& trial) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write trial file " + path.string());
  out.write(kTrialMagic.data(), static_cast<std::streamsize>(kTrialMagic.size()));
  write_le<std::uint16_t>(out, kTrialFormatVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(trial.n_channels()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(trial.n_samples()));
  write_le<double>(out, trial.sampling_rate_hz());
  for (const auto& name : trial.channel_names()) out.write(name.c_str(), name.size() + 1);
  out.write(reinterpret_cast<const char*>(trial.samples().data()),
            static_cast<std::streamsize>(trial.samples().size() * sizeof(float)));
  if (!out) throw DataError("write failed for " + path.string());
}

TrialSet load_trial_set(const fs::path& manifest_path, const ProtocolTiming& protocol) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest " + manifest_path.string());
  const fs::path base = manifest_path.parent_path();

  std::string line;
  if (!std::getline(in, line)) throw DataError(manifest_path.string() + ": empty manifest");
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"subject_id", "trial_index", "label", "file"};
  if (header != expected)
    throw DataError(manifest_path.string() +
                    ": header must be subject_id,trial_index,label,file");

  std::vector<TrialRecording> trials;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    const std::string where = manifest_path.string() + ":" + std::to_string(line_no);
    if (f.size() != 4) throw DataError(where + ": expected 4 fields");
    std::uint32_t idx = 0;
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(f[1], &pos);
      if (pos != f[1].size() || f[1].front() == '-' || v > UINT32_MAX)
        throw std::invalid_argument("range");
      idx = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw DataError(where + ": bad trial_index '" + f[1] + "'");
    }
    Label label;
    try {
      label = label_from_string(f[2]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    trials.push_back(read_trial_file(base / f[3], f[0], idx, label));
  }
  return TrialSet(std::move(trials), protocol);
}

fs::path write_trial_set(const TrialSet& set, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path manifest = dir / "manifest.csv";
  std::ofstream out(manifest, std::ios::trunc);
  if (!out) throw DataError("cannot write manifest " + manifest.string());
  out << "subject_id,trial_index,label,file\n";
  for (const auto& t : set.trials()) {
    const std::string file = t.subject_id() + "_" + std::to_string(t.trial_index()) + ".mieeg";
    write_trial_file(dir / file, t);
    out << t.subject_id() << ',' << t.trial_index() << ',' << to_string(t.label()) << ','
        << file << '\n';
  }
  return manifest;
}

TrialSet select_channels(const TrialSet& set, const std::vector<std::string>& keep) {
  if (set.empty()) return set;
  const auto& names = set.trials().front().channel_names();
  std::vector<std::size_t> rows;
  rows.reserve(keep.size());
  for (const auto& k : keep) {
    const auto it = std::find(names.begin(), names.end(), k);
    if (it == names.end()) throw DataError("unknown channel name '" + k + "'");
    rows.push_back(static_cast<std::size_t>(it - names.begin()));
  }

  std::vector<TrialRecording> out;
  out.reserve(set.size());
  for (const auto& t : set.trials()) {
    std::vector<float> samples;
    samples.reserve(rows.size() * t.n_samples());
    for (auto r : rows) {
      const auto ch = t.channel(r);
      samples.insert(samples.end(), ch.begin(), ch.end());
    }
    out.emplace_back(t.subject_id(), t.trial_index(), t.label(), t.sampling_rate_hz(), keep,
                     t.n_samples(), std::move(samples));
  }
  return TrialSet(std::move(out), set.protocol());
}

void SyntheticSpec::validate() const {
  if (n_subjects == 0 || trials_per_class == 0 || n_channels == 0)
    throw DataError("synthetic spec: subjects, trials and channels must be positive");
  if (!(duration_s > 0) || !(sampling_rate_hz > 0))
    throw DataError("synthetic spec: duration and sampling rate must be positive");
  if (!(noise_std >= 0) || !(background_amplitude_std >= 0) || !(subject_gain_std >= 0) ||
      !(channel_gain_log_std >= 0))
    throw DataError("synthetic spec: standard deviations must be non-negative");
  if (!(contrast_hz > 0) || contrast_hz >= sampling_rate_hz / 2)
    throw DataError("synthetic spec: contrast frequency must lie below Nyquist");
  for (auto c : contrast_channels)
    if (c >= n_channels) throw DataError("synthetic spec: contrast channel out of range");
}

TrialSet generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto n_samples = static_cast<std::size_t>(std::lround(spec.duration_s * spec.sampling_rate_hz));
  if (n_samples < 2) throw DataError("synthetic spec: fewer than 2 samples per trial");

  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.n_channels; ++c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "CH%02zu", c + 1);
    names.emplace_back(buf);
  }
  std::vector<bool> is_contrast(spec.n_channels, false);
  for (auto c : spec.contrast_channels) is_contrast[c] = true;

  ProtocolTiming protocol;
  protocol.window_start_s = 0.0;
  protocol.window_end_s = spec.duration_s;

  const double omega = 2.0 * std::numbers::pi * spec.contrast_hz / spec.sampling_rate_hz;
  std::vector<double> channel_gain(spec.n_channels, 1.0);
  if (spec.channel_gain_log_std > 0) {
    Rng gain_rng(mix_seed({seed, 0x4348414eULL}));
    for (auto& g : channel_gain) g = std::exp(spec.channel_gain_log_std * gain_rng.normal());
  }
  std::vector<TrialRecording> trials;
  trials.reserve(spec.n_subjects * spec.trials_per_class * 2);
  for (std::size_t s = 0; s < spec.n_subjects; ++s) {
    char sid[16];
    std::snprintf(sid, sizeof sid, "S%zu", s + 1);
    Rng subject_rng(mix_seed({seed, 0x5355424aULL, s}));
    const double gain = std::max(0.1, 1.0 + spec.subject_gain_std * subject_rng.normal());

    // Interleave classes: even trial index Right, odd Left.
    for (std::size_t i = 0; i < 2 * spec.trials_per_class; ++i) {
      const Label label = (i % 2 == 0) ? Label::Right : Label::Left;
      Rng rng(mix_seed({seed, s, i}));
      std::vector<float> samples(spec.n_channels * n_samples);
      for (std::size_t c = 0; c < spec.n_channels; ++c) {
        double amp = 0.0;
        double phase = 0.0;
        if (is_contrast[c]) {
          amp = gain * std::abs(spec.background_amplitude_mean +
                                spec.background_amplitude_std * rng.normal());
          if (label == Label::Left) amp += spec.contrast_amplitude;
          phase = 2.0 * std::numbers::pi * rng.uniform();
        }
        float* row = samples.data() + c * n_samples;
        for (std::size_t t = 0; t < n_samples; ++t) {
          const double v = channel_gain[c] * (spec.noise_std * rng.normal() +
                                              amp * std::sin(omega * static_cast<double>(t) + phase));
          row[t] = static_cast<float>(v);
        }
      }
      trials.emplace_back(sid, static_cast<std::uint32_t>(i), label, spec.sampling_rate_hz, names,
                          n_samples, std::move(samples));
    }
  }
  return TrialSet(std::move(trials), protocol);
}

}  // namespace mibench
