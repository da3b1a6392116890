#include "mibench/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace mibench {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Parsers throw std::invalid_argument with a short description of the expected type.
double to_double(const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw std::invalid_argument("expected a real number");
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw std::invalid_argument("expected a non-negative integer");
  return out;
}

std::size_t to_size(const std::string& v) { return static_cast<std::size_t>(to_u64(v)); }

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true or false");
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element");
    out.push_back(item);
  }
  return out;
}

template <typename T, typename F>
std::vector<T> map_list(const std::string& v, F f) {
  std::vector<T> out;
  for (const auto& s : to_list(v)) out.push_back(f(s));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, std::string>) out += v[i];
    else if constexpr (std::is_same_v<T, Algorithm>) out += to_string(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::filesystem::path&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define MIB_REAL(key, member)                                                               \
  {key, {[](RunConfig& c, const std::string& v, const auto&) { c.member = to_double(v); }, \
         [](const RunConfig& c) { return fmt(c.member); }}}
#define MIB_SIZE(key, member)                                                             \
  {key, {[](RunConfig& c, const std::string& v, const auto&) { c.member = to_size(v); }, \
         [](const RunConfig& c) { return std::to_string(c.member); }}}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"data.manifest",
       {[](RunConfig& c, const std::string& v, const std::filesystem::path& base) {
          c.manifest = v.empty() ? std::filesystem::path{} : base / v;
        },
        [](const RunConfig& c) { return c.manifest.string(); }}},
      {"data.channels",
       {[](RunConfig& c, const std::string& v, const auto&) {
          c.all_channels = v == "all";
          c.channels = c.all_channels ? std::vector<std::string>{} : to_list(v);
        },
        [](const RunConfig& c) { return c.all_channels ? std::string("all") : join(c.channels); }}},
      MIB_REAL("protocol.cue_s", protocol.cue_s),
      MIB_REAL("protocol.task_s", protocol.task_s),
      MIB_REAL("protocol.rest_s", protocol.rest_s),
      MIB_REAL("protocol.window_start_s", protocol.window_start_s),
      MIB_REAL("protocol.window_end_s", protocol.window_end_s),
      MIB_REAL("segment.drop_head_s", pipeline.drop_head_s),
      MIB_REAL("segment.drop_tail_s", pipeline.drop_tail_s),
      {"filter.order",
       {[](RunConfig& c, const std::string& v, const auto&) {
          const auto o = to_size(v);
          if (o == 0 || o > 32) throw std::invalid_argument("expected an integer in [1, 32]");
          c.pipeline.filter_order = static_cast<int>(o);
        },
        [](const RunConfig& c) { return std::to_string(c.pipeline.filter_order); }}},
      MIB_REAL("filter.low_hz", pipeline.filter_low_hz),
      MIB_REAL("filter.high_hz", pipeline.filter_high_hz),
      MIB_SIZE("feature.window_bins", pipeline.pooling.window_bins),
      MIB_REAL("feature.band_low_hz", pipeline.pooling.band_low_hz),
      MIB_REAL("feature.band_high_hz", pipeline.pooling.band_high_hz),
      MIB_REAL("select.p_threshold_ss", pipeline.p_threshold_ss),
      MIB_REAL("select.p_threshold_si", pipeline.p_threshold_si),
      {"select.mode",
       {[](RunConfig& c, const std::string& v, const auto&) {
          if (v == "faithful") c.pipeline.mode = SelectionMode::Faithful;
          else if (v == "clean") c.pipeline.mode = SelectionMode::Clean;
          else throw std::invalid_argument("expected faithful or clean");
          c.mode_explicit = true;
        },
        [](const RunConfig& c) { return std::string(to_string(c.pipeline.mode)); }}},
      MIB_REAL("lda.shrinkage_ss", pipeline.lda_shrinkage_ss),
      MIB_REAL("lda.shrinkage_si", pipeline.lda_shrinkage_si),
      MIB_REAL("svm.c", pipeline.classifier.svm_c),
      MIB_REAL("svm.tol", pipeline.classifier.svm_tol),
      {"svm.kernel",
       {[](RunConfig& c, const std::string& v, const auto&) {
          if (v == "linear") c.pipeline.classifier.svm_kernel = KernelType::Linear;
          else if (v == "rbf") c.pipeline.classifier.svm_kernel = KernelType::Rbf;
          else throw std::invalid_argument("expected linear or rbf");
        },
        [](const RunConfig& c) {
          return std::string(c.pipeline.classifier.svm_kernel == KernelType::Linear ? "linear" : "rbf");
        }}},
      {"svm.sigma",
       {[](RunConfig& c, const std::string& v, const auto&) {
          if (v == "median") {
            c.pipeline.classifier.svm_sigma.reset();
            return;
          }
          const double s = to_double(v);
          if (!(s > 0)) throw std::invalid_argument("expected median or a positive real");
          c.pipeline.classifier.svm_sigma = s;
        },
        [](const RunConfig& c) {
          return c.pipeline.classifier.svm_sigma ? fmt(*c.pipeline.classifier.svm_sigma) : std::string("median");
        }}},
      MIB_SIZE("cart.min_leaf", pipeline.classifier.cart_min_leaf),
      MIB_SIZE("knn.k", pipeline.classifier.knn_k),
      MIB_SIZE("eval.reps", pipeline.reps),
      {"eval.master_seed",
       {[](RunConfig& c, const std::string& v, const auto&) { c.pipeline.master_seed = to_u64(v); },
        [](const RunConfig& c) { return std::to_string(c.pipeline.master_seed); }}},
      {"eval.fixed_split",
       {[](RunConfig& c, const std::string& v, const auto&) { c.pipeline.fixed_split = to_bool(v); },
        [](const RunConfig& c) { return std::string(c.pipeline.fixed_split ? "true" : "false"); }}},
      {"eval.ss_sizes",
       {[](RunConfig& c, const std::string& v, const auto&) { c.ss_sizes = map_list<std::size_t>(v, to_size); },
        [](const RunConfig& c) { return join(c.ss_sizes); }}},
      {"eval.si_sizes",
       {[](RunConfig& c, const std::string& v, const auto&) { c.si_sizes = map_list<std::size_t>(v, to_size); },
        [](const RunConfig& c) { return join(c.si_sizes); }}},
      {"eval.algorithms",
       {[](RunConfig& c, const std::string& v, const auto&) {
          c.algorithms = map_list<Algorithm>(v, [](const std::string& s) { return algorithm_from_string(s); });
        },
        [](const RunConfig& c) { return join(c.algorithms); }}},
      MIB_SIZE("synth.n_subjects", synth.n_subjects),
      MIB_SIZE("synth.trials_per_class", synth.trials_per_class),
      MIB_SIZE("synth.n_channels", synth.n_channels),
      MIB_REAL("synth.duration_s", synth.duration_s),
      MIB_REAL("synth.sampling_rate_hz", synth.sampling_rate_hz),
      MIB_REAL("synth.noise_std", synth.noise_std),
      MIB_REAL("synth.contrast_amplitude", synth.contrast_amplitude),
      MIB_REAL("synth.contrast_hz", synth.contrast_hz),
      {"synth.contrast_channels",
       {[](RunConfig& c, const std::string& v, const auto&) {
          c.synth.contrast_channels = v.empty() ? std::vector<std::size_t>{} : map_list<std::size_t>(v, to_size);
        },
        [](const RunConfig& c) { return join(c.synth.contrast_channels); }}},
      MIB_REAL("synth.background_amplitude_mean", synth.background_amplitude_mean),
      MIB_REAL("synth.background_amplitude_std", synth.background_amplitude_std),
      MIB_REAL("synth.subject_gain_std", synth.subject_gain_std),
      MIB_REAL("synth.channel_gain_log_std", synth.channel_gain_log_std),
      {"synth.seed",
       {[](RunConfig& c, const std::string& v, const auto&) { c.synth_seed = to_u64(v); },
        [](const RunConfig& c) { return std::to_string(c.synth_seed); }}},
      {"output.dir",
       {[](RunConfig& c, const std::string& v, const std::filesystem::path& base) { c.output_dir = base / v; },
        [](const RunConfig& c) { return c.output_dir.string(); }}},
  };
  return table;
}

#undef MIB_REAL
#undef MIB_SIZE

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, f] : fields()) keys.push_back(k);
  return keys;
}

std::map<std::string, std::string> RunConfig::snapshot() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, f] : fields()) out[k] = f.get(*this);
  return out;
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig c;
  std::stringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError(where + ": unknown key '" + key + "'");
    try {
      it->second.set(c, value, base_dir);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + key + " = '" + value + "': " + e.what());
    }
  }
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

}  // namespace mibench
