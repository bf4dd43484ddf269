// include/spoofcm/scores.hpp

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

#ifndef SPOOFCM_SCORES_HPP_
#define SPOOFCM_SCORES_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace spoofcm {

/// One detection score. `system` is the producing system's tag (for fused
/// scores, the constituent that was selected); it may be empty.
struct TrialScore {
  std::string trial_id;
  double score = 0.0;
  std::string system;

  bool operator==(const TrialScore &) const = default;
};

/// Scores of one system, in file order.
struct ScoreSet {
  std::string system;
  std::vector<TrialScore> scores;

  std::size_t size() const { return scores.size(); }
  /// Throws kTrialIdMismatch if the id is absent.
  const TrialScore &at(const std::string &trial_id) const;
};

/// Text format: "trial_id<TAB>score" per line, scores in shortest
/// round-trip decimal form. When `with_system` is set a third column carries
/// each score's system tag.
void write_scores(std::ostream &os, const ScoreSet &set, bool with_system = false);
void write_scores(const std::filesystem::path &path, const ScoreSet &set,
                  bool with_system = false);

/// Accepts two or three tab-separated columns per line. Throws
/// kMalformedLine (with the 1-based line number) or kDuplicateTrialId.
ScoreSet read_scores(std::istream &is, const std::string &system = {},
                     const std::string &source = "<stream>");
ScoreSet read_scores(const std::filesystem::path &path, const std::string &system = {});

std::string format_double(double v);

}  // namespace spoofcm

#endif  // SPOOFCM_SCORES_HPP_
