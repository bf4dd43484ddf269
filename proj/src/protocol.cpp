// src/protocol.cpp

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

#include "spoofcm/protocol.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "spoofcm/binary_io.hpp"
#include "spoofcm/error.hpp"

namespace spoofcm {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(sep, pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    out.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string located(const std::string &source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no) + ": ";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const TrialScore &ScoreSet::at(const std::string &trial_id) const {
  for (const auto &s : scores)
    if (s.trial_id == trial_id) return s;
  fail(ErrorCode::kTrialIdMismatch, "trial '" + trial_id + "' not in " + system);
}

void write_scores(std::ostream &os, const ScoreSet &set, bool with_system) {
  for (const auto &s : set.scores) {
    os << s.trial_id << '\t' << format_double(s.score);
    if (with_system) os << '\t' << s.system;
    os << '\n';
  }
}

void write_scores(const std::filesystem::path &path, const ScoreSet &set,
                  bool with_system) {
  std::ofstream os = io::open_output(path);
  write_scores(os, set, with_system);
  if (!os) fail(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

ScoreSet read_scores(std::istream &is, const std::string &system,
                     const std::string &source) {
  ScoreSet set;
  set.system = system;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty())
      fail(ErrorCode::kMalformedLine,
           located(source, line_no) + "expected 'trial_id<TAB>score[<TAB>system]'");
    TrialScore s;
    s.trial_id = std::string(cols[0]);
    const char *first = cols[1].data();
    const char *last = first + cols[1].size();
    const auto res = std::from_chars(first, last, s.score);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(s.score))
      fail(ErrorCode::kMalformedLine, located(source, line_no) + "bad score '" +
                                          std::string(cols[1]) + "'");
    s.system = cols.size() == 3 ? std::string(cols[2]) : system;
    if (!seen.insert(s.trial_id).second)
      fail(ErrorCode::kDuplicateTrialId,
           located(source, line_no) + "duplicate trial id '" + s.trial_id + "'");
    set.scores.push_back(std::move(s));
  }
  return set;
}

ScoreSet read_scores(const std::filesystem::path &path, const std::string &system) {
  std::ifstream is = io::open_input(path);
  return read_scores(is, system, path.string());
}

std::vector<Trial> parse_protocol(std::istream &is, Subset subset,
                                  const std::string &source) {
  std::vector<Trial> trials;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::vector<std::string> cols;
    for (std::string tok; ss >> tok;) cols.push_back(tok);
    if (cols.empty()) continue;
    if (cols.size() != 4)
      fail(ErrorCode::kMalformedLine,
           located(source, line_no) +
               "expected 'speaker_id utterance_id attack_id label', got " +
               std::to_string(cols.size()) + " fields");
    Trial t;
    t.speaker_id = cols[0];
    t.utterance_id = cols[1];
    t.attack_id = cols[2];
    t.subset = subset;
    if (cols[3] == "bonafide")
      t.label = Label::kBonafide;
    else if (cols[3] == "spoof")
      t.label = Label::kSpoof;
    else
      fail(ErrorCode::kMalformedLine,
           located(source, line_no) + "unknown label '" + cols[3] + "'");
    if ((t.label == Label::kBonafide) != (t.attack_id == "-"))
      fail(ErrorCode::kLabelAttackMismatch,
           located(source, line_no) + "label '" + cols[3] +
               "' inconsistent with attack id '" + t.attack_id + "'");
    if (!seen.insert(t.utterance_id).second)
      fail(ErrorCode::kDuplicateUtteranceId,
           located(source, line_no) + "duplicate utterance id '" + t.utterance_id + "'");
    trials.push_back(std::move(t));
  }
  return trials;
}

std::vector<Trial> parse_protocol(const std::filesystem::path &path, Subset subset) {
  std::ifstream is = io::open_input(path);
  return parse_protocol(is, subset, path.string());
}

void write_protocol(std::ostream &os, const std::vector<Trial> &trials) {
  for (const auto &t : trials)
    os << t.speaker_id << ' ' << t.utterance_id << ' ' << t.attack_id << ' '
       << to_string(t.label) << '\n';
}

void write_protocol(const std::filesystem::path &path, const std::vector<Trial> &trials) {
  std::ofstream os = io::open_output(path);
  write_protocol(os, trials);
  if (!os) fail(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

LabeledScores join_scores(const ScoreSet &scores, const std::vector<Trial> &trials) {
  std::unordered_map<std::string, double> by_id;
  by_id.reserve(scores.size());
  for (const auto &s : scores.scores) by_id.emplace(s.trial_id, s.score);

  LabeledScores out;
  std::vector<std::string> missing;
  for (const auto &t : trials) {
    auto it = by_id.find(t.utterance_id);
    if (it == by_id.end()) {
      missing.push_back(t.utterance_id);
      continue;
    }
    out.ids.push_back(t.utterance_id);
    out.scores.push_back(it->second);
    out.labels.push_back(t.label);
  }
  const std::size_t extra = scores.size() - out.size();
  if (!missing.empty() || extra != 0) {
    std::string msg = "score file '" + scores.system + "' and protocol disagree: " +
                      std::to_string(missing.size()) + " protocol trials unscored, " +
                      std::to_string(extra) + " scores without a protocol entry";
    if (!missing.empty()) msg += " (first missing: " + missing.front() + ")";
    fail(ErrorCode::kTrialSetMismatch, msg);
  }
  return out;
}

}  // namespace spoofcm
