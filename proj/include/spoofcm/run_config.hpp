// include/spoofcm/run_config.hpp

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

#ifndef SPOOFCM_RUN_CONFIG_HPP_
#define SPOOFCM_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "spoofcm/cqcc.hpp"
#include "spoofcm/gmm.hpp"
#include "spoofcm/metrics.hpp"
#include "spoofcm/spectral.hpp"
#include "spoofcm/synth.hpp"
#include "spoofcm/xvector_train.hpp"

namespace spoofcm {

/// Every tunable of a pipeline run. Serialized as flat "section.key = value"
/// lines; each key is also a command-line flag "--section.key".
struct RunConfig {
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path work_dir = "work";

  std::uint64_t seed = 42;
  int workers = 1;

  SynthConfig synth;

  // Shared spectral settings; num_filters = 0 picks the per-kind default.
  SpectralConfig frontend;
  CqccConfig cqcc;

  int gmm_components = 512;
  EmOptions gmm;

  TrainOptions xvector;

  std::vector<std::string> fusion_systems = {"G-MFCC", "G-LFCC", "x-MFCC"};
  std::string fusion_name = "G-Prim";
  bool fusion_calibrate = true;
  std::string calibration_subset = "dev";

  TDcfParams tdcf = default_tdcf_params();
  bool tdcf_synthetic_asv = true;
  double asv_target_mean = 2.5;
  double asv_spoof_mean = 0.5;

  double accuracy_threshold = 0.0;

  RunConfig();

  /// Spectral settings for one kind, with the per-kind filter count applied.
  SpectralConfig spectral_for(FeatureKind kind) const;
  /// t-DCF parameters with the synthetic ASV operating point applied when
  /// enabled.
  TDcfParams effective_tdcf() const;
  /// Seeds and worker counts of the sub-configs follow run.seed / run.workers.
  void propagate_run_settings();
};

struct ConfigKey {
  std::string name;  // "section.key"
  std::string help;
  std::function<void(RunConfig &, const std::string &)> set;
  std::function<std::string(const RunConfig &)> get;
};

/// The single table that defines both the config-file keys and the flags.
const std::vector<ConfigKey> &config_keys();

/// Applies "key = value" lines. '#' starts a comment; blank lines are
/// skipped. Unknown keys and bad values raise kConfigError with the line.
void apply_config(RunConfig &cfg, std::istream &is, const std::string &source = "<config>");
void apply_config_file(RunConfig &cfg, const std::filesystem::path &path);
void apply_overrides(RunConfig &cfg, const std::map<std::string, std::string> &values);
/// SPOOFCM_CORPUS_DIR and SPOOFCM_WORK_DIR override the two path keys.
void apply_environment(RunConfig &cfg);

/// The full config in file syntax, one key per line in table order.
std::string dump_config(const RunConfig &cfg);

}  // namespace spoofcm

#endif  // SPOOFCM_RUN_CONFIG_HPP_
