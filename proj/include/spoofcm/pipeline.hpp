// include/spoofcm/pipeline.hpp

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

#ifndef SPOOFCM_PIPELINE_HPP_
#define SPOOFCM_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "spoofcm/fusion.hpp"
#include "spoofcm/gmm.hpp"
#include "spoofcm/metrics.hpp"
#include "spoofcm/run_config.hpp"
#include "spoofcm/scores.hpp"
#include "spoofcm/synth.hpp"
#include "spoofcm/xvector_train.hpp"

namespace spoofcm {

enum class Backend { kGmm, kXVector };

/// A single system "G-<FEAT>" or "x-<FEAT>".
struct SystemId {
  Backend backend = Backend::kGmm;
  FeatureKind kind = FeatureKind::kMFCC;

  std::string name() const;
};

/// Throws kInvalidArgument for anything but "G-<FEAT>" / "x-<FEAT>".
SystemId parse_system_name(const std::string &name);

std::filesystem::path feature_archive_path(const RunConfig &cfg, FeatureKind kind, Subset subset);
std::filesystem::path gmm_model_path(const RunConfig &cfg, FeatureKind kind, Label label);
std::filesystem::path xvector_model_path(const RunConfig &cfg, FeatureKind kind);
std::filesystem::path score_path(const RunConfig &cfg, const std::string &system, Subset subset);

std::vector<Trial> load_protocol(const RunConfig &cfg, Subset subset);

/// Feature extraction with the configured front-end for `kind`.
FeatureMatrix extract_feature(const RunConfig &cfg, FeatureKind kind, const Waveform &wave);
std::uint64_t feature_digest(const RunConfig &cfg, FeatureKind kind);

CorpusSummary run_synth_corpus(const RunConfig &cfg);

struct ExtractSummary {
  std::filesystem::path archive;
  std::size_t utterances = 0;
  std::size_t frames = 0;
};
ExtractSummary run_extract(const RunConfig &cfg, FeatureKind kind, Subset subset);

/// Features of a subset joined with its protocol, in protocol order.
std::vector<LabeledFeatures> load_labeled_features(const RunConfig &cfg, FeatureKind kind,
                                                   Subset subset);

struct GmmTrainSummary {
  EmResult bonafide;
  EmResult spoof;
};
GmmTrainSummary run_train_gmm(const RunConfig &cfg, FeatureKind kind);

TrainState<float> run_train_xvector(const RunConfig &cfg, FeatureKind kind);

/// Scores every trial of `subset` in protocol order and writes the score file.
ScoreSet run_score(const RunConfig &cfg, const std::string &system, Subset subset);

/// DLFS over cfg.fusion_systems; writes a three-column score file whose last
/// column names the selected constituent.
FusedScoreSet run_fuse(const RunConfig &cfg, Subset subset);

struct EvaluationReport {
  SystemMetrics metrics;
  /// Present for fused score files: how often each constituent was chosen.
  std::vector<std::pair<std::string, std::size_t>> selection_counts;
};
EvaluationReport run_evaluate(const RunConfig &cfg, const std::string &system, Subset subset);
/// Same as above with explicit files.
EvaluationReport evaluate_files(const RunConfig &cfg, const std::string &system,
                                const std::filesystem::path &scores,
                                const std::filesystem::path &protocol, Subset subset);

}  // namespace spoofcm

#endif  // SPOOFCM_PIPELINE_HPP_
