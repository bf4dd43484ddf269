// src/pipeline.cpp

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

#include "spoofcm/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

#include "spoofcm/cqcc.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/feature_io.hpp"
#include "spoofcm/parallel.hpp"
#include "spoofcm/spectral.hpp"
#include "spoofcm/xvector.hpp"

namespace spoofcm {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

MatrixXd stack_frames(const std::vector<LabeledFeatures> &data, Label label) {
  Index rows = 0, dim = -1;
  for (const auto &d : data)
    if (d.label == label) {
      rows += d.features.num_frames();
      dim = d.features.dim();
    }
  if (rows == 0)
    fail(ErrorCode::kSingleClassDataset,
         std::string("no ") + std::string(to_string(label)) + " training utterances");
  MatrixXd out(rows, dim);
  Index r = 0;
  for (const auto &d : data)
    if (d.label == label) {
      out.middleRows(r, d.features.num_frames()) = d.features.values;
      r += d.features.num_frames();
    }
  return out;
}

}  // namespace

std::string SystemId::name() const {
  return std::string(backend == Backend::kGmm ? "G-" : "x-") + std::string(to_string(kind));
}

SystemId parse_system_name(const std::string &name) {
  if (name.size() < 3 || name[1] != '-' || (name[0] != 'G' && name[0] != 'x'))
    fail(ErrorCode::kInvalidArgument,
         "system names are G-<FEATURE> or x-<FEATURE>, got '" + name + "'");
  SystemId id;
  id.backend = name[0] == 'G' ? Backend::kGmm : Backend::kXVector;
  id.kind = parse_feature_kind(name.substr(2));
  return id;
}

std::filesystem::path feature_archive_path(const RunConfig &cfg, FeatureKind kind,
                                           Subset subset) {
  return cfg.work_dir / "features" / lower(to_string(kind)) /
         (std::string(to_string(subset)) + ".ark");
}

std::filesystem::path gmm_model_path(const RunConfig &cfg, FeatureKind kind, Label label) {
  return cfg.work_dir / "models" /
         ("G-" + std::string(to_string(kind)) + "." + std::string(to_string(label)) + ".gmm");
}

std::filesystem::path xvector_model_path(const RunConfig &cfg, FeatureKind kind) {
  return cfg.work_dir / "models" / ("x-" + std::string(to_string(kind)) + ".xv");
}

std::filesystem::path score_path(const RunConfig &cfg, const std::string &system,
                                 Subset subset) {
  return cfg.work_dir / "scores" / (system + "." + std::string(to_string(subset)) + ".txt");
}

std::vector<Trial> load_protocol(const RunConfig &cfg, Subset subset) {
  return parse_protocol(protocol_path(cfg.corpus_dir, subset), subset);
}

FeatureMatrix extract_feature(const RunConfig &cfg, FeatureKind kind, const Waveform &wave) {
  if (kind == FeatureKind::kCQCC) return extract_cqcc(wave, cfg.cqcc);
  return extract_spectral_feature(wave, cfg.spectral_for(kind));
}

std::uint64_t feature_digest(const RunConfig &cfg, FeatureKind kind) {
  return kind == FeatureKind::kCQCC ? cfg.cqcc.digest() : cfg.spectral_for(kind).digest();
}

CorpusSummary run_synth_corpus(const RunConfig &cfg) {
  SynthConfig synth = cfg.synth;
  synth.seed = cfg.seed;
  return generate_corpus(synth, cfg.corpus_dir, cfg.workers);
}

ExtractSummary run_extract(const RunConfig &cfg, FeatureKind kind, Subset subset) {
  const std::vector<Trial> trials = load_protocol(cfg, subset);
  std::vector<FeatureMatrix> feats(trials.size());
  parallel_for(trials.size(), cfg.workers, [&](std::size_t i) {
    const Waveform w = read_wav(wav_path(cfg.corpus_dir, subset, trials[i].utterance_id));
    feats[i] = extract_feature(cfg, kind, w);
  });
  ExtractSummary summary;
  summary.archive = feature_archive_path(cfg, kind, subset);
  FeatureArchiveWriter writer(summary.archive);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    writer.add(trials[i].utterance_id, feats[i]);
    summary.frames += static_cast<std::size_t>(feats[i].num_frames());
  }
  writer.close();
  summary.utterances = trials.size();
  return summary;
}

std::vector<LabeledFeatures> load_labeled_features(const RunConfig &cfg, FeatureKind kind,
                                                   Subset subset) {
  const std::vector<Trial> trials = load_protocol(cfg, subset);
  auto archive = read_feature_archive(feature_archive_path(cfg, kind, subset));
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < archive.size(); ++i) pos.emplace(archive[i].first, i);
  if (archive.size() != trials.size())
    fail(ErrorCode::kTrialSetMismatch,
         "feature archive has " + std::to_string(archive.size()) + " utterances, protocol has " +
             std::to_string(trials.size()));
  const std::uint64_t digest = feature_digest(cfg, kind);
  std::vector<LabeledFeatures> out;
  out.reserve(trials.size());
  for (const Trial &t : trials) {
    const auto it = pos.find(t.utterance_id);
    if (it == pos.end())
      fail(ErrorCode::kTrialSetMismatch,
           "utterance '" + t.utterance_id + "' missing from the feature archive");
    FeatureMatrix &f = archive[it->second].second;
    if (f.kind != kind)
      fail(ErrorCode::kKindMismatch, "archive holds " + std::string(to_string(f.kind)) +
                                         " features, expected " +
                                         std::string(to_string(kind)));
    if (f.config_digest != digest)
      fail(ErrorCode::kConfigError,
           "features were extracted with a different front-end configuration; rerun extract");
    out.push_back({t.utterance_id, std::move(f), t.label});
  }
  return out;
}

GmmTrainSummary run_train_gmm(const RunConfig &cfg, FeatureKind kind) {
  const std::vector<LabeledFeatures> data = load_labeled_features(cfg, kind, Subset::kTrain);
  EmOptions opts = cfg.gmm;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  GmmTrainSummary out{
      em_fit(stack_frames(data, Label::kBonafide), cfg.gmm_components, opts, kind),
      em_fit(stack_frames(data, Label::kSpoof), cfg.gmm_components, opts, kind)};
  save_gmm(gmm_model_path(cfg, kind, Label::kBonafide), out.bonafide.model);
  save_gmm(gmm_model_path(cfg, kind, Label::kSpoof), out.spoof.model);
  return out;
}

TrainState<float> run_train_xvector(const RunConfig &cfg, FeatureKind kind) {
  const std::vector<LabeledFeatures> data = load_labeled_features(cfg, kind, Subset::kTrain);
  TrainOptions opts = cfg.xvector;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  TrainState<float> state = train_xvector<float>(data, opts);
  save_xvector(xvector_model_path(cfg, kind), state.model, feature_digest(cfg, kind));
  return state;
}

ScoreSet run_score(const RunConfig &cfg, const std::string &system, Subset subset) {
  const SystemId id = parse_system_name(system);
  const std::vector<LabeledFeatures> data = load_labeled_features(cfg, id.kind, subset);
  ScoreSet set;
  set.system = system;
  set.scores.resize(data.size());
  if (id.backend == Backend::kGmm) {
    const DiagGmm bona = load_gmm(gmm_model_path(cfg, id.kind, Label::kBonafide));
    const DiagGmm spoof = load_gmm(gmm_model_path(cfg, id.kind, Label::kSpoof));
    parallel_for(data.size(), cfg.workers, [&](std::size_t i) {
      set.scores[i] = gmm_score(bona, spoof, data[i].features, data[i].utt_id);
    });
  } else {
    std::uint64_t digest = 0;
    const XVectorModel<float> model = load_xvector(xvector_model_path(cfg, id.kind), &digest);
    if (digest != feature_digest(cfg, id.kind))
      fail(ErrorCode::kConfigError,
           "x-vector model was trained on features with a different configuration");
    parallel_for(data.size(), cfg.workers, [&](std::size_t i) {
      set.scores[i] = xvector_score(model, data[i].features, data[i].utt_id);
    });
  }
  for (auto &s : set.scores) s.system = system;
  write_scores(score_path(cfg, system, subset), set);
  return set;
}

FusedScoreSet run_fuse(const RunConfig &cfg, Subset subset) {
  if (cfg.fusion_systems.empty())
    fail(ErrorCode::kConfigError, "fusion.systems is empty");
  std::vector<ScoreSet> sets;
  std::vector<Calibration> calibrations;
  const Subset cal_subset = parse_subset(cfg.calibration_subset);
  for (const std::string &name : cfg.fusion_systems) {
    sets.push_back(read_scores(score_path(cfg, name, subset), name));
    if (cfg.fusion_calibrate)
      calibrations.push_back(calibrate(read_scores(score_path(cfg, name, cal_subset), name)));
  }
  std::optional<std::span<const Calibration>> cal;
  if (cfg.fusion_calibrate) cal = std::span<const Calibration>(calibrations);
  FusedScoreSet fused = fuse_all(sets, cal, cfg.fusion_name);
  write_scores(score_path(cfg, cfg.fusion_name, subset), fused.fused, /*with_system=*/true);
  return fused;
}

EvaluationReport evaluate_files(const RunConfig &cfg, const std::string &system,
                                const std::filesystem::path &scores,
                                const std::filesystem::path &protocol, Subset subset) {
  const ScoreSet set = read_scores(scores, system);
  const std::vector<Trial> trials = parse_protocol(protocol, subset);
  EvaluationReport report;
  report.metrics =
      evaluate_scores(system, join_scores(set, trials), cfg.effective_tdcf(),
                      cfg.accuracy_threshold);

  std::map<std::string, std::size_t> counts;
  bool tagged = false;
  for (const TrialScore &s : set.scores)
    if (s.system != system) {
      tagged = true;
      ++counts[s.system];
    }
  if (tagged) {
    // Configured constituents first, in configured order, then any others.
    for (const std::string &name : cfg.fusion_systems)
      if (auto it = counts.find(name); it != counts.end() || system == cfg.fusion_name) {
        report.selection_counts.emplace_back(name, it == counts.end() ? 0 : it->second);
        if (it != counts.end()) counts.erase(it);
      }
    for (const auto &[name, n] : counts) report.selection_counts.emplace_back(name, n);
  }
  return report;
}

EvaluationReport run_evaluate(const RunConfig &cfg, const std::string &system, Subset subset) {
  return evaluate_files(cfg, system, score_path(cfg, system, subset),
                        protocol_path(cfg.corpus_dir, subset), subset);
}

}  // namespace spoofcm
