// tools/spoofcm_cli.cpp

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

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spoofcm/error.hpp"
#include "spoofcm/pipeline.hpp"
#include "spoofcm/run_config.hpp"

namespace {

using spoofcm::RunConfig;

// Options shared by every subcommand: --config plus one flag per config key.
struct CommonOptions {
  std::string config_file;
  bool dump_config = false;
  std::map<std::string, std::string> overrides;
};

void add_common(CLI::App *cmd, CommonOptions &opts) {
  cmd->add_option("--config", opts.config_file, "flat 'section.key = value' config file")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--dump-config", opts.dump_config,
                "print the effective configuration before running");
  for (const spoofcm::ConfigKey &key : spoofcm::config_keys()) {
    cmd->add_option_function<std::string>(
           "--" + key.name,
           [&opts, name = key.name](const std::string &v) { opts.overrides[name] = v; },
           key.help)
        ->group("Config keys");
  }
}

RunConfig resolve(const CommonOptions &opts) {
  RunConfig cfg;
  if (!opts.config_file.empty()) spoofcm::apply_config_file(cfg, opts.config_file);
  spoofcm::apply_environment(cfg);
  spoofcm::apply_overrides(cfg, opts.overrides);
  if (opts.dump_config) std::cout << spoofcm::dump_config(cfg);
  return cfg;
}

std::vector<spoofcm::Subset> parse_subsets(const std::vector<std::string> &names) {
  std::vector<spoofcm::Subset> out;
  for (const auto &n : names) out.push_back(spoofcm::parse_subset(n));
  return out;
}

std::vector<spoofcm::FeatureKind> parse_features(const std::vector<std::string> &names) {
  std::vector<spoofcm::FeatureKind> out;
  for (const auto &n : names) out.push_back(spoofcm::parse_feature_kind(n));
  return out;
}

void print_metrics(const spoofcm::EvaluationReport &r, spoofcm::Subset subset) {
  const auto &m = r.metrics;
  std::printf("system=%s subset=%s trials=%zu eer_percent=%.4f min_tdcf=%.6f accuracy_percent=%.4f\n",
              m.system.c_str(), std::string(spoofcm::to_string(subset)).c_str(), m.trials,
              m.eer_percent, m.min_tdcf, m.accuracy_percent);
  for (const auto &[name, count] : r.selection_counts)
    std::printf("selection system=%s constituent=%s count=%zu\n", m.system.c_str(), name.c_str(),
                count);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Spoofing countermeasure toolkit: synthetic corpus, front-ends, GMM and x-vector back-ends, DLFS fusion, evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spoofcm 1.0.0");

  CommonOptions common;

  auto *show = app.add_subcommand("config", "print the effective configuration and exit");
  add_common(show, common);

  auto *synth = app.add_subcommand("synth-corpus", "generate the synthetic two-class corpus");
  add_common(synth, common);

  std::vector<std::string> features = {"MFCC"};
  std::vector<std::string> subsets = {"train", "dev"};
  auto *extract = app.add_subcommand("extract", "extract features into per-subset archives");
  add_common(extract, common);
  extract->add_option("--feature", features, "feature kinds (LFCC, MFCC, IMFCC, LFBE, MFBE, IMFBE, CQCC)")
      ->delimiter(',');
  extract->add_option("--subset", subsets, "subsets to process")->delimiter(',');

  auto *train_gmm = app.add_subcommand("train-gmm", "train bonafide and spoof GMMs on train");
  add_common(train_gmm, common);
  train_gmm->add_option("--feature", features, "feature kinds")->delimiter(',');

  auto *train_xv = app.add_subcommand("train-xvector", "train the x-vector classifier on train");
  add_common(train_xv, common);
  train_xv->add_option("--feature", features, "feature kinds")->delimiter(',');

  std::vector<std::string> systems;
  std::vector<std::string> score_subsets = {"dev"};
  auto *score = app.add_subcommand("score", "score a subset with trained systems");
  add_common(score, common);
  score->add_option("--system", systems, "systems such as G-MFCC or x-LFCC")
      ->delimiter(',')
      ->required();
  score->add_option("--subset", score_subsets, "subsets to score")->delimiter(',');

  auto *fuse = app.add_subcommand("fuse", "DLFS fusion of fusion.systems into fusion.name");
  add_common(fuse, common);
  fuse->add_option("--subset", score_subsets, "subsets to fuse")->delimiter(',');

  std::string scores_file, protocol_file;
  auto *evaluate = app.add_subcommand("evaluate", "print EER %, min-t-DCF and accuracy %");
  add_common(evaluate, common);
  evaluate->add_option("--system", systems, "systems to evaluate")->delimiter(',')->required();
  evaluate->add_option("--subset", score_subsets, "subsets to evaluate")->delimiter(',');
  evaluate->add_option("--scores", scores_file, "explicit score file (single system)");
  evaluate->add_option("--protocol", protocol_file, "explicit protocol file (single system)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = resolve(common);
    if (show->parsed()) {
      if (!common.dump_config) std::cout << spoofcm::dump_config(cfg);
      return 0;
    }
    if (synth->parsed()) {
      const auto s = spoofcm::run_synth_corpus(cfg);
      for (auto sub : {spoofcm::Subset::kTrain, spoofcm::Subset::kDev, spoofcm::Subset::kEval}) {
        const auto &c = s.counts[static_cast<std::size_t>(sub)];
        std::printf("subset=%s bonafide=%d spoof=%d\n",
                    std::string(spoofcm::to_string(sub)).c_str(), c.bonafide, c.spoof);
      }
      std::printf("band_energy_ratio_db=%.3f\n", s.band_energy_ratio_db);
    } else if (extract->parsed()) {
      for (auto kind : parse_features(features))
        for (auto sub : parse_subsets(subsets)) {
          const auto s = spoofcm::run_extract(cfg, kind, sub);
          std::printf("feature=%s subset=%s utterances=%zu frames=%zu archive=%s\n",
                      std::string(spoofcm::to_string(kind)).c_str(),
                      std::string(spoofcm::to_string(sub)).c_str(), s.utterances, s.frames,
                      s.archive.string().c_str());
        }
    } else if (train_gmm->parsed()) {
      for (auto kind : parse_features(features)) {
        const auto s = spoofcm::run_train_gmm(cfg, kind);
        std::printf("system=G-%s bonafide_iters=%zu bonafide_avg_ll=%.6f spoof_iters=%zu "
                    "spoof_avg_ll=%.6f collapses=%zu\n",
                    std::string(spoofcm::to_string(kind)).c_str(),
                    s.bonafide.log_likelihood_trace.size(),
                    s.bonafide.log_likelihood_trace.back(), s.spoof.log_likelihood_trace.size(),
                    s.spoof.log_likelihood_trace.back(),
                    s.bonafide.collapses.size() + s.spoof.collapses.size());
      }
    } else if (train_xv->parsed()) {
      for (auto kind : parse_features(features)) {
        const auto s = spoofcm::run_train_xvector(cfg, kind);
        for (int e = 0; e < s.epoch; ++e)
          std::printf("system=x-%s epoch=%d train_loss=%.6f validation_loss=%.6f lr=%g\n",
                      std::string(spoofcm::to_string(kind)).c_str(), e + 1, s.train_loss[e],
                      s.validation_loss[e], s.learning_rate[e]);
        std::printf("system=x-%s best_epoch=%d\n", std::string(spoofcm::to_string(kind)).c_str(),
                    s.best_epoch + 1);
      }
    } else if (score->parsed()) {
      for (const auto &sys : systems)
        for (auto sub : parse_subsets(score_subsets)) {
          const auto s = spoofcm::run_score(cfg, sys, sub);
          std::printf("system=%s subset=%s trials=%zu scores=%s\n", sys.c_str(),
                      std::string(spoofcm::to_string(sub)).c_str(), s.size(),
                      spoofcm::score_path(cfg, sys, sub).string().c_str());
        }
    } else if (fuse->parsed()) {
      for (auto sub : parse_subsets(score_subsets)) {
        const auto f = spoofcm::run_fuse(cfg, sub);
        for (std::size_t i = 0; i < f.systems.size(); ++i)
          std::printf("selection system=%s constituent=%s count=%zu\n", cfg.fusion_name.c_str(),
                      f.systems[i].c_str(), f.selection_counts[i]);
        std::printf("system=%s subset=%s trials=%zu scores=%s\n", cfg.fusion_name.c_str(),
                    std::string(spoofcm::to_string(sub)).c_str(), f.fused.size(),
                    spoofcm::score_path(cfg, cfg.fusion_name, sub).string().c_str());
      }
    } else if (evaluate->parsed()) {
      const bool explicit_files = !scores_file.empty() || !protocol_file.empty();
      if (explicit_files) {
        if (scores_file.empty() || protocol_file.empty() || systems.size() != 1 ||
            score_subsets.size() != 1)
          spoofcm::fail(spoofcm::ErrorCode::kInvalidArgument,
                        "--scores and --protocol go together with one --system and one --subset");
        const auto sub = spoofcm::parse_subset(score_subsets.front());
        print_metrics(spoofcm::evaluate_files(cfg, systems.front(), scores_file, protocol_file, sub),
                      sub);
      } else {
        for (const auto &sys : systems)
          for (auto sub : parse_subsets(score_subsets))
            print_metrics(spoofcm::run_evaluate(cfg, sys, sub), sub);
      }
    }
    std::fprintf(stderr, "elapsed_seconds=%.2f\n", seconds_since(t0));
    return 0;
  } catch (const spoofcm::Error &e) {
    std::fprintf(stderr, "error: code=%s exit=%d message=%s\n",
                 std::string(spoofcm::error_code_name(e.code())).c_str(),
                 spoofcm::exit_code(e.code()), e.what());
    return spoofcm::exit_code(e.code());
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: code=Unexpected exit=1 message=%s\n", e.what());
    return 1;
  }
}
