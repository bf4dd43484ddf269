// include/spoofcm/feature_io.hpp

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

#ifndef SPOOFCM_FEATURE_IO_HPP_
#define SPOOFCM_FEATURE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "spoofcm/spectral.hpp"

namespace spoofcm {

// Record layout (little-endian):
//   "SPFB" | u16 version | u16 len + kind string | u64 config digest |
//   u32 T | u32 D | T*D f32, row-major
inline constexpr std::uint16_t kFeatureFormatVersion = 1;

void write_feature_record(std::ostream &os, const FeatureMatrix &features);
FeatureMatrix read_feature_record(std::istream &is);

void write_features(const std::filesystem::path &path, const FeatureMatrix &features);
FeatureMatrix read_features(const std::filesystem::path &path);

struct ArchiveEntry {
  std::string utt_id;
  std::uint64_t offset = 0;
  std::uint32_t frames = 0;
  std::uint32_t dim = 0;
};

/// Concatenated SPFB records in `<stem>.ark` plus a text index `<stem>.idx`
/// with one "utt_id offset T D" line per record.
class FeatureArchiveWriter {
 public:
  explicit FeatureArchiveWriter(const std::filesystem::path &ark_path);
  ~FeatureArchiveWriter();
  FeatureArchiveWriter(const FeatureArchiveWriter &) = delete;
  FeatureArchiveWriter &operator=(const FeatureArchiveWriter &) = delete;

  void add(const std::string &utt_id, const FeatureMatrix &features);
  /// Flushes the archive and writes the index. Called by the destructor if
  /// not called explicitly.
  void close();

 private:
  std::filesystem::path ark_path_;
  std::vector<ArchiveEntry> entries_;
  std::unique_ptr<std::ofstream> ark_;
};

std::filesystem::path index_path_for(const std::filesystem::path &ark_path);

std::vector<ArchiveEntry> read_archive_index(const std::filesystem::path &ark_path);

/// Loads every record of an archive, keyed by utterance id in index order.
std::vector<std::pair<std::string, FeatureMatrix>> read_feature_archive(
    const std::filesystem::path &ark_path);

}  // namespace spoofcm

#endif  // SPOOFCM_FEATURE_IO_HPP_
