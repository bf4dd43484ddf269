// src/fusion.cpp

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

#include "spoofcm/fusion.hpp"

#include <cmath>
#include <unordered_map>

#include "spoofcm/error.hpp"

namespace spoofcm {

ScoreSet Calibration::apply(const ScoreSet &set) const {
  ScoreSet out = set;
  for (auto &s : out.scores) s.score = apply(s.score);
  return out;
}

Calibration calibrate(std::span<const double> dev_scores) {
  if (dev_scores.size() < 2)
    fail(ErrorCode::kDegenerateScores, "calibration needs at least two scores");
  double mean = 0.0;
  for (double s : dev_scores) mean += s;
  mean /= static_cast<double>(dev_scores.size());
  double var = 0.0;
  for (double s : dev_scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(dev_scores.size());
  const double sd = std::sqrt(var);
  if (!(sd > 0.0) || !std::isfinite(sd))
    fail(ErrorCode::kDegenerateScores, "calibration scores have zero spread");
  return {mean, sd};
}

Calibration calibrate(const ScoreSet &dev_scores) {
  std::vector<double> v;
  v.reserve(dev_scores.size());
  for (const auto &s : dev_scores.scores) v.push_back(s.score);
  try {
    return calibrate(v);
  } catch (const Error &e) {
    fail(e.code(), std::string(e.what()) + " (system " + dev_scores.system + ")");
  }
}

namespace {

std::size_t select_index(std::span<const TrialScore> candidates) {
  if (candidates.empty()) fail(ErrorCode::kEmptyInput, "no candidate scores to switch between");
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].trial_id != candidates[0].trial_id)
      fail(ErrorCode::kTrialIdMismatch, "candidates mix trials '" + candidates[0].trial_id +
                                            "' and '" + candidates[i].trial_id + "'");
    if (std::abs(candidates[i].score) > std::abs(candidates[best].score)) best = i;
  }
  return best;
}

}  // namespace

TrialScore dlfs_select(std::span<const TrialScore> candidates) {
  return candidates[select_index(candidates)];
}

FusedScoreSet fuse_all(std::span<const ScoreSet> systems,
                       std::optional<std::span<const Calibration>> calibrations,
                       const std::string &fused_name) {
  if (systems.empty()) fail(ErrorCode::kEmptyInput, "no systems to fuse");
  if (calibrations && calibrations->size() != systems.size())
    fail(ErrorCode::kInvalidArgument, "need one calibration per system");

  std::vector<std::unordered_map<std::string, std::size_t>> lookup(systems.size());
  for (std::size_t s = 0; s < systems.size(); ++s) {
    for (std::size_t i = 0; i < systems[s].scores.size(); ++i)
      lookup[s].emplace(systems[s].scores[i].trial_id, i);
  }
  const ScoreSet &reference = systems.front();
  for (std::size_t s = 1; s < systems.size(); ++s) {
    std::vector<std::string> diff;
    for (const auto &t : reference.scores)
      if (!lookup[s].contains(t.trial_id)) diff.push_back(t.trial_id);
    for (const auto &t : systems[s].scores)
      if (!lookup[0].contains(t.trial_id)) diff.push_back(t.trial_id);
    if (!diff.empty()) {
      std::string msg = "trial sets of '" + reference.system + "' and '" +
                        systems[s].system + "' differ in " + std::to_string(diff.size()) +
                        " ids:";
      for (std::size_t i = 0; i < diff.size() && i < 10; ++i) msg += " " + diff[i];
      if (diff.size() > 10) msg += " ...";
      fail(ErrorCode::kTrialSetMismatch, msg);
    }
  }

  FusedScoreSet out;
  out.fused.system = fused_name;
  out.selection_counts.assign(systems.size(), 0);
  for (const auto &s : systems) out.systems.push_back(s.system);

  std::vector<TrialScore> candidates(systems.size());
  for (const auto &t : reference.scores) {
    for (std::size_t s = 0; s < systems.size(); ++s) {
      const TrialScore &raw = systems[s].scores[lookup[s].at(t.trial_id)];
      candidates[s].trial_id = raw.trial_id;
      candidates[s].score = calibrations ? (*calibrations)[s].apply(raw.score) : raw.score;
      candidates[s].system = systems[s].system;
    }
    const std::size_t chosen = select_index(candidates);
    ++out.selection_counts[chosen];
    out.fused.scores.push_back(candidates[chosen]);
  }
  return out;
}

}  // namespace spoofcm
