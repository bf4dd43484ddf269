// include/spoofcm/protocol.hpp

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

#ifndef SPOOFCM_PROTOCOL_HPP_
#define SPOOFCM_PROTOCOL_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spoofcm/scores.hpp"
#include "spoofcm/types.hpp"

namespace spoofcm {

/// One protocol line. Bonafide trials have attack_id "-".
struct Trial {
  std::string speaker_id;
  std::string utterance_id;
  std::string attack_id;
  Label label = Label::kBonafide;
  Subset subset = Subset::kTrain;

  bool operator==(const Trial &) const = default;
};

/// Parses "speaker_id utterance_id attack_id label" lines (space separated;
/// blank lines skipped). Errors carry "<source>:<line>".
std::vector<Trial> parse_protocol(std::istream &is, Subset subset,
                                  const std::string &source = "<stream>");
std::vector<Trial> parse_protocol(const std::filesystem::path &path, Subset subset);

void write_protocol(std::ostream &os, const std::vector<Trial> &trials);
void write_protocol(const std::filesystem::path &path, const std::vector<Trial> &trials);

/// Scores joined with protocol labels, in protocol order.
struct LabeledScores {
  std::vector<std::string> ids;
  std::vector<double> scores;
  std::vector<Label> labels;

  std::size_t size() const { return scores.size(); }
};

/// Throws kTrialSetMismatch unless the score ids equal the protocol ids.
LabeledScores join_scores(const ScoreSet &scores, const std::vector<Trial> &trials);

}  // namespace spoofcm

#endif  // SPOOFCM_PROTOCOL_HPP_
