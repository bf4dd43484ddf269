// include/spoofcm/fusion.hpp

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

#ifndef SPOOFCM_FUSION_HPP_
#define SPOOFCM_FUSION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spoofcm/scores.hpp"

namespace spoofcm {

/// Affine map s -> (s - shift) / scale estimated on development scores.
struct Calibration {
  double shift = 0.0;
  double scale = 1.0;

  double apply(double s) const { return (s - shift) / scale; }
  ScoreSet apply(const ScoreSet &set) const;
};

/// shift = mean, scale = population std of the scores. Throws
/// kDegenerateScores when fewer than two distinct values are present.
Calibration calibrate(std::span<const double> dev_scores);
Calibration calibrate(const ScoreSet &dev_scores);

/// Decision-level feature switching for one trial: the candidate with the
/// largest |score| wins, ties go to the earliest candidate. The winner's
/// `system` tag is kept. Throws kEmptyInput / kTrialIdMismatch.
TrialScore dlfs_select(std::span<const TrialScore> candidates);

struct FusedScoreSet {
  std::vector<std::string> systems;         // constituent order
  ScoreSet fused;                           // system tag = selected constituent
  std::vector<std::size_t> selection_counts;  // parallel to `systems`
};

/// Applies dlfs_select to every trial. Trials follow the order of the first
/// system. When `calibrations` is given (one per system) scores are
/// calibrated before switching. Throws kTrialSetMismatch if the trial-id
/// sets differ.
FusedScoreSet fuse_all(std::span<const ScoreSet> systems,
                       std::optional<std::span<const Calibration>> calibrations,
                       const std::string &fused_name = "DLFS");

}  // namespace spoofcm

#endif  // SPOOFCM_FUSION_HPP_
