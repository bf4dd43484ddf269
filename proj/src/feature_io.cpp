// src/feature_io.cpp

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

#include "spoofcm/feature_io.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "spoofcm/binary_io.hpp"
#include "spoofcm/error.hpp"

namespace spoofcm {

void write_feature_record(std::ostream &os, const FeatureMatrix &features) {
  if (!features.values.allFinite())
    fail(ErrorCode::kInvalidArgument, "refusing to write non-finite features");
  os.write("SPFB", 4);
  io::write_le<std::uint16_t>(os, kFeatureFormatVersion);
  io::write_string(os, to_string(features.kind));
  io::write_le<std::uint64_t>(os, features.config_digest);
  io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(features.num_frames()));
  io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(features.dim()));
  for (Index t = 0; t < features.num_frames(); ++t)
    for (Index d = 0; d < features.dim(); ++d)
      io::write_le<float>(os, static_cast<float>(features.values(t, d)));
}

FeatureMatrix read_feature_record(std::istream &is) {
  io::expect_magic(is, "SPFB");
  const auto version = io::read_le<std::uint16_t>(is);
  if (version != kFeatureFormatVersion)
    fail(ErrorCode::kBadFormat, "unsupported feature format version " +
                                    std::to_string(version));
  FeatureMatrix f;
  f.kind = parse_feature_kind(io::read_string(is));
  f.config_digest = io::read_le<std::uint64_t>(is);
  const auto t = io::read_le<std::uint32_t>(is);
  const auto d = io::read_le<std::uint32_t>(is);
  f.values.resize(t, d);
  for (Index i = 0; i < t; ++i)
    for (Index j = 0; j < d; ++j) f.values(i, j) = io::read_le<float>(is);
  return f;
}

void write_features(const std::filesystem::path &path, const FeatureMatrix &features) {
  std::ofstream os = io::open_output(path);
  write_feature_record(os, features);
  if (!os) fail(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

FeatureMatrix read_features(const std::filesystem::path &path) {
  std::ifstream is = io::open_input(path);
  return read_feature_record(is);
}

std::filesystem::path index_path_for(const std::filesystem::path &ark_path) {
  std::filesystem::path p = ark_path;
  p.replace_extension(".idx");
  return p;
}

FeatureArchiveWriter::FeatureArchiveWriter(const std::filesystem::path &ark_path)
    : ark_path_(ark_path),
      ark_(std::make_unique<std::ofstream>(io::open_output(ark_path))) {}

FeatureArchiveWriter::~FeatureArchiveWriter() {
  try {
    close();
  } catch (...) {
  }
}

void FeatureArchiveWriter::add(const std::string &utt_id, const FeatureMatrix &features) {
  if (!ark_) fail(ErrorCode::kIoError, "archive already closed");
  ArchiveEntry e;
  e.utt_id = utt_id;
  e.offset = static_cast<std::uint64_t>(ark_->tellp());
  e.frames = static_cast<std::uint32_t>(features.num_frames());
  e.dim = static_cast<std::uint32_t>(features.dim());
  write_feature_record(*ark_, features);
  entries_.push_back(std::move(e));
}

void FeatureArchiveWriter::close() {
  if (!ark_) return;
  ark_->flush();
  const bool ok = static_cast<bool>(*ark_);
  ark_.reset();
  if (!ok) fail(ErrorCode::kIoError, "write failed for '" + ark_path_.string() + "'");
  std::ofstream idx = io::open_output(index_path_for(ark_path_));
  for (const auto &e : entries_)
    idx << e.utt_id << ' ' << e.offset << ' ' << e.frames << ' ' << e.dim << '\n';
}

std::vector<ArchiveEntry> read_archive_index(const std::filesystem::path &ark_path) {
  const auto idx_path = index_path_for(ark_path);
  std::ifstream is = io::open_input(idx_path);
  std::vector<ArchiveEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    ArchiveEntry e;
    if (!(ss >> e.utt_id >> e.offset >> e.frames >> e.dim))
      fail(ErrorCode::kMalformedLine, idx_path.string() + ":" + std::to_string(line_no) +
                                          ": expected 'utt_id offset T D'");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<std::pair<std::string, FeatureMatrix>> read_feature_archive(
    const std::filesystem::path &ark_path) {
  const auto entries = read_archive_index(ark_path);
  std::ifstream is = io::open_input(ark_path);
  std::vector<std::pair<std::string, FeatureMatrix>> out;
  out.reserve(entries.size());
  for (const auto &e : entries) {
    is.seekg(static_cast<std::streamoff>(e.offset));
    FeatureMatrix f = read_feature_record(is);
    if (f.num_frames() != e.frames || f.dim() != e.dim)
      fail(ErrorCode::kBadFormat, "archive index disagrees with record for " + e.utt_id);
    out.emplace_back(e.utt_id, std::move(f));
  }
  return out;
}

}  // namespace spoofcm
