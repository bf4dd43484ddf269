// src/run_config.cpp

// Copyright 2026  spoofcm authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spoofcm/run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spoofcm/error.hpp"
#include "spoofcm/protocol.hpp"
#include "spoofcm/scores.hpp"

namespace spoofcm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string &v, const char *what) {
  fail(ErrorCode::kConfigError, "expected " + std::string(what) + ", got '" + v + "'");
}

template <typename T>
T parse_number(const std::string &v) {
  T out{};
  const char *end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(v, "a number");
  return out;
}

bool parse_bool(const std::string &v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(v, "a boolean");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string number_text(double v) { return format_double(v); }
template <typename T>
std::string number_text(T v) requires std::is_integral_v<T> { return std::to_string(v); }

std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::string join_list(const std::vector<std::string> &v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

// Binds a key to a field reached through `access`.
template <typename T, typename Access>
ConfigKey field(std::string name, std::string help, Access access) {
  ConfigKey k;
  k.name = std::move(name);
  k.help = std::move(help);
  k.set = [access](RunConfig &c, const std::string &v) {
    T &ref = access(c);
    if constexpr (std::is_same_v<T, bool>) ref = parse_bool(v);
    else if constexpr (std::is_same_v<T, std::string>) ref = v;
    else if constexpr (std::is_same_v<T, std::filesystem::path>) ref = v;
    else if constexpr (std::is_same_v<T, std::vector<std::string>>) ref = split_list(v);
    else if constexpr (std::is_same_v<T, FeatureKind>) ref = parse_feature_kind(v);
    else if constexpr (std::is_same_v<T, WindowKind>) ref = parse_window_kind(v);
    else ref = parse_number<T>(v);
  };
  k.get = [access](const RunConfig &c) -> std::string {
    const T &ref = access(const_cast<RunConfig &>(c));
    if constexpr (std::is_same_v<T, bool>) return bool_text(ref);
    else if constexpr (std::is_same_v<T, std::string>) return ref;
    else if constexpr (std::is_same_v<T, std::filesystem::path>) return ref.string();
    else if constexpr (std::is_same_v<T, std::vector<std::string>>) return join_list(ref);
    else if constexpr (std::is_same_v<T, FeatureKind> || std::is_same_v<T, WindowKind>)
      return std::string(to_string(ref));
    else return number_text(ref);
  };
  return k;
}

#define SPOOFCM_FIELD(T, name, help, expr) \
  field<T>(name, help, [](RunConfig &c) -> T & { return expr; })

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  k.push_back(SPOOFCM_FIELD(std::filesystem::path, "paths.corpus",
                            "synthetic corpus directory (wavs + protocols)", c.corpus_dir));
  k.push_back(SPOOFCM_FIELD(std::filesystem::path, "paths.work",
                            "working directory for features, models and scores", c.work_dir));
  k.push_back(SPOOFCM_FIELD(std::uint64_t, "run.seed", "master random seed", c.seed));
  k.push_back(SPOOFCM_FIELD(int, "run.workers", "worker threads within a stage", c.workers));

  const char *subsets[] = {"train", "dev", "eval"};
  for (int s = 0; s < 3; ++s) {
    const std::string sub = subsets[s];
    k.push_back(field<int>("corpus." + sub + "_bonafide", "bonafide utterances in " + sub,
                           [s](RunConfig &c) -> int & { return c.synth.counts[s].bonafide; }));
    k.push_back(field<int>("corpus." + sub + "_spoof", "spoof utterances in " + sub,
                           [s](RunConfig &c) -> int & { return c.synth.counts[s].spoof; }));
  }
  k.push_back(SPOOFCM_FIELD(double, "corpus.seconds", "utterance duration in seconds",
                            c.synth.utterance_seconds));
  k.push_back(SPOOFCM_FIELD(int, "corpus.sample_rate", "sample rate in Hz",
                            c.synth.sample_rate_hz));
  k.push_back(SPOOFCM_FIELD(int, "corpus.speakers", "number of speakers", c.synth.num_speakers));
  k.push_back(SPOOFCM_FIELD(int, "corpus.attacks", "number of attack tags", c.synth.num_attacks));

  k.push_back(SPOOFCM_FIELD(double, "frontend.pre_emphasis", "pre-emphasis coefficient",
                            c.frontend.pre_emphasis));
  k.push_back(SPOOFCM_FIELD(double, "frontend.frame_ms", "frame length in ms",
                            c.frontend.frame_ms));
  k.push_back(SPOOFCM_FIELD(double, "frontend.hop_ms", "frame hop in ms", c.frontend.hop_ms));
  k.push_back(SPOOFCM_FIELD(WindowKind, "frontend.window", "hamming, hann or rect",
                            c.frontend.window));
  k.push_back(SPOOFCM_FIELD(int, "frontend.nfft", "FFT size", c.frontend.nfft));
  k.push_back(SPOOFCM_FIELD(int, "frontend.num_filters",
                            "filters per bank (0: 20 for cepstra, 40 for energies)",
                            c.frontend.num_filters));
  k.push_back(SPOOFCM_FIELD(int, "frontend.num_ceps", "cepstral coefficients",
                            c.frontend.num_ceps));
  k.push_back(SPOOFCM_FIELD(double, "frontend.f_min", "lowest filterbank edge in Hz",
                            c.frontend.f_min_hz));
  k.push_back(SPOOFCM_FIELD(double, "frontend.f_max", "highest filterbank edge in Hz (0: Nyquist)",
                            c.frontend.f_max_hz));
  k.push_back(SPOOFCM_FIELD(double, "frontend.energy_floor", "floor before the log",
                            c.frontend.energy_floor));
  k.push_back(SPOOFCM_FIELD(bool, "frontend.deltas", "append delta and delta-delta",
                            c.frontend.deltas));
  k.push_back(SPOOFCM_FIELD(int, "frontend.delta_window", "delta regression half-width",
                            c.frontend.delta_window));
  k.push_back(SPOOFCM_FIELD(bool, "frontend.keep_c0", "keep the 0th cepstral coefficient",
                            c.frontend.keep_c0));
  k.push_back(SPOOFCM_FIELD(bool, "frontend.cmvn", "per-utterance mean/variance normalization",
                            c.frontend.cmvn));

  k.push_back(SPOOFCM_FIELD(double, "cqcc.f_min", "lowest CQT bin in Hz", c.cqcc.f_min_hz));
  k.push_back(SPOOFCM_FIELD(double, "cqcc.f_max", "highest CQT frequency in Hz (0: Nyquist)",
                            c.cqcc.f_max_hz));
  k.push_back(SPOOFCM_FIELD(int, "cqcc.bins_per_octave", "CQT bins per octave",
                            c.cqcc.bins_per_octave));
  k.push_back(SPOOFCM_FIELD(int, "cqcc.resample_points", "uniform resampling points",
                            c.cqcc.resample_points));
  k.push_back(SPOOFCM_FIELD(int, "cqcc.num_ceps", "cepstral coefficients", c.cqcc.num_ceps));
  k.push_back(SPOOFCM_FIELD(double, "cqcc.hop_ms", "frame hop in ms", c.cqcc.hop_ms));
  k.push_back(SPOOFCM_FIELD(double, "cqcc.frame_ms", "frame length in ms", c.cqcc.frame_ms));
  k.push_back(SPOOFCM_FIELD(bool, "cqcc.deltas", "append delta and delta-delta",
                            c.cqcc.deltas));
  k.push_back(SPOOFCM_FIELD(bool, "cqcc.keep_c0", "keep the 0th cepstral coefficient",
                            c.cqcc.keep_c0));

  k.push_back(SPOOFCM_FIELD(int, "gmm.components", "mixture components per class",
                            c.gmm_components));
  k.push_back(SPOOFCM_FIELD(int, "gmm.max_iters", "EM iteration cap", c.gmm.max_iters));
  k.push_back(SPOOFCM_FIELD(double, "gmm.tol", "stop when the average log-likelihood gain is below this",
                            c.gmm.tol));
  k.push_back(SPOOFCM_FIELD(double, "gmm.abs_var_floor", "absolute variance floor",
                            c.gmm.abs_var_floor));
  k.push_back(SPOOFCM_FIELD(double, "gmm.rel_var_floor", "variance floor relative to data variance",
                            c.gmm.rel_var_floor));

  k.push_back(SPOOFCM_FIELD(int, "xvector.tdnn1", "first TDNN width", c.xvector.dims.tdnn1_dim));
  k.push_back(SPOOFCM_FIELD(int, "xvector.tdnn2", "second TDNN width", c.xvector.dims.tdnn2_dim));
  k.push_back(SPOOFCM_FIELD(int, "xvector.embedding", "embedding width",
                            c.xvector.dims.embedding_dim));
  k.push_back(SPOOFCM_FIELD(double, "xvector.alpha", "focal loss alpha", c.xvector.focal.alpha));
  k.push_back(SPOOFCM_FIELD(double, "xvector.gamma", "focal loss gamma", c.xvector.focal.gamma));
  k.push_back(SPOOFCM_FIELD(double, "xvector.lr", "initial learning rate",
                            c.xvector.learning_rate));
  k.push_back(SPOOFCM_FIELD(double, "xvector.momentum", "SGD momentum", c.xvector.momentum));
  k.push_back(SPOOFCM_FIELD(int, "xvector.epochs", "training epochs", c.xvector.epochs));
  k.push_back(SPOOFCM_FIELD(int, "xvector.batch", "minibatch size", c.xvector.batch_size));
  k.push_back(SPOOFCM_FIELD(int, "xvector.crop", "training crop length in frames",
                            c.xvector.crop_frames));
  k.push_back(SPOOFCM_FIELD(double, "xvector.validation_fraction",
                            "fraction of each class held out for validation",
                            c.xvector.validation_fraction));
  k.push_back(SPOOFCM_FIELD(bool, "xvector.normalize_inputs",
                            "standardize inputs with training statistics",
                            c.xvector.normalize_inputs));

  k.push_back(SPOOFCM_FIELD(std::vector<std::string>, "fusion.systems",
                            "comma-separated constituent systems", c.fusion_systems));
  k.push_back(SPOOFCM_FIELD(std::string, "fusion.name", "name of the fused system",
                            c.fusion_name));
  k.push_back(SPOOFCM_FIELD(bool, "fusion.calibrate", "z-score calibrate before switching",
                            c.fusion_calibrate));
  k.push_back(SPOOFCM_FIELD(std::string, "fusion.calibration_subset",
                            "subset whose scores estimate the calibration",
                            c.calibration_subset));

  k.push_back(SPOOFCM_FIELD(double, "tdcf.pi_target", "target prior", c.tdcf.pi_target));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.pi_nontarget", "non-target prior",
                            c.tdcf.pi_nontarget));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.pi_spoof", "spoof prior", c.tdcf.pi_spoof));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.c_miss_asv", "ASV miss cost", c.tdcf.c_miss_asv));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.c_fa_asv", "ASV false-alarm cost", c.tdcf.c_fa_asv));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.c_miss_cm", "CM miss cost", c.tdcf.c_miss_cm));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.c_fa_cm", "CM false-alarm cost", c.tdcf.c_fa_cm));
  k.push_back(SPOOFCM_FIELD(bool, "tdcf.synthetic_asv",
                            "derive ASV error rates from the Gaussian stand-in",
                            c.tdcf_synthetic_asv));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.asv_target_mean", "stand-in ASV target score mean",
                            c.asv_target_mean));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.asv_spoof_mean", "stand-in ASV spoof score mean",
                            c.asv_spoof_mean));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.p_miss_asv", "ASV miss rate (synthetic_asv=false)",
                            c.tdcf.p_miss_asv));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.p_fa_asv",
                            "ASV false-alarm rate (synthetic_asv=false)", c.tdcf.p_fa_asv));
  k.push_back(SPOOFCM_FIELD(double, "tdcf.p_miss_spoof_asv",
                            "ASV spoof miss rate (synthetic_asv=false)",
                            c.tdcf.p_miss_spoof_asv));

  k.push_back(SPOOFCM_FIELD(double, "evaluate.threshold", "decision threshold for accuracy",
                            c.accuracy_threshold));
  return k;
}

#undef SPOOFCM_FIELD

}  // namespace

RunConfig::RunConfig() {
  frontend.num_filters = 0;
  propagate_run_settings();
}

SpectralConfig RunConfig::spectral_for(FeatureKind kind) const {
  if (kind == FeatureKind::kCQCC)
    fail(ErrorCode::kInvalidArgument, "CQCC has its own configuration");
  SpectralConfig out = frontend;
  out.kind = kind;
  if (out.num_filters == 0) out.num_filters = SpectralConfig::defaults(kind).num_filters;
  return out;
}

TDcfParams RunConfig::effective_tdcf() const {
  TDcfParams p = tdcf;
  if (tdcf_synthetic_asv) {
    const AsvOperatingPoint op = synthetic_asv_operating_point(asv_target_mean, asv_spoof_mean);
    p.p_miss_asv = op.p_miss;
    p.p_fa_asv = op.p_fa;
    p.p_miss_spoof_asv = op.p_miss_spoof;
  }
  p.validate();
  return p;
}

void RunConfig::propagate_run_settings() {
  synth.seed = seed;
  gmm.seed = seed;
  gmm.workers = workers;
  xvector.seed = seed;
  xvector.workers = workers;
}

const std::vector<ConfigKey> &config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

namespace {

const ConfigKey &find_key(const std::string &name) {
  for (const ConfigKey &k : config_keys())
    if (k.name == name) return k;
  fail(ErrorCode::kConfigError, "unknown config key '" + name + "'");
}

}  // namespace

void apply_config(RunConfig &cfg, std::istream &is, const std::string &source) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos)
      fail(ErrorCode::kConfigError, where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      find_key(key).set(cfg, value);
    } catch (const Error &e) {
      fail(ErrorCode::kConfigError, where + ": " + e.what());
    }
  }
  cfg.propagate_run_settings();
}

void apply_config_file(RunConfig &cfg, const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::kNotFound, "cannot open config " + path.string());
  apply_config(cfg, is, path.string());
}

void apply_overrides(RunConfig &cfg, const std::map<std::string, std::string> &values) {
  for (const auto &[key, value] : values) {
    try {
      find_key(key).set(cfg, value);
    } catch (const Error &e) {
      fail(ErrorCode::kConfigError, "--" + key + ": " + e.what());
    }
  }
  cfg.propagate_run_settings();
}

void apply_environment(RunConfig &cfg) {
  if (const char *v = std::getenv("SPOOFCM_CORPUS_DIR"); v && *v) cfg.corpus_dir = v;
  if (const char *v = std::getenv("SPOOFCM_WORK_DIR"); v && *v) cfg.work_dir = v;
}

std::string dump_config(const RunConfig &cfg) {
  std::string out;
  for (const ConfigKey &k : config_keys()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

}  // namespace spoofcm
