// src/xvector.cpp

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

#include "spoofcm/xvector.hpp"

#include <fstream>

#include "spoofcm/binary_io.hpp"

namespace spoofcm {

void FocalLossParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    fail(ErrorCode::kInvalidArgument, "focal loss alpha must be > 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    fail(ErrorCode::kInvalidArgument, "focal loss gamma must be >= 0");
}

namespace {

template <typename Derived>
void write_tensor(std::ostream &os, const Eigen::MatrixBase<Derived> &t) {
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j) io::write_le<float>(os, static_cast<float>(t(i, j)));
}

template <typename Derived>
void read_tensor(std::istream &is, Eigen::MatrixBase<Derived> &t) {
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j) t(i, j) = io::read_le<float>(is);
}

}  // namespace

void save_xvector(const std::filesystem::path &path, const XVectorModel<float> &model,
                  std::uint64_t config_digest) {
  std::ofstream os = io::open_output(path);
  os.write("SPXV", 4);
  io::write_le<std::uint16_t>(os, kXVectorFormatVersion);
  io::write_string(os, to_string(model.kind));
  for (int d : {model.dims.input_dim, model.dims.tdnn1_dim, model.dims.tdnn2_dim,
                model.dims.embedding_dim})
    io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  io::write_le<double>(os, model.focal.alpha);
  io::write_le<double>(os, model.focal.gamma);
  io::write_le<std::uint64_t>(os, config_digest);
  write_tensor(os, model.input_mean);
  write_tensor(os, model.input_scale);
  for_each_tensor([&os](const auto &t) { write_tensor(os, t); }, model.params);
  if (!os) fail(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

XVectorModel<float> load_xvector(const std::filesystem::path &path,
                                 std::uint64_t *config_digest) {
  std::ifstream is = io::open_input(path);
  io::expect_magic(is, "SPXV");
  const auto version = io::read_le<std::uint16_t>(is);
  if (version != kXVectorFormatVersion)
    fail(ErrorCode::kBadFormat, "unsupported x-vector format version " +
                                    std::to_string(version));
  XVectorModel<float> m;
  m.kind = parse_feature_kind(io::read_string(is));
  m.dims.input_dim = static_cast<int>(io::read_le<std::uint32_t>(is));
  m.dims.tdnn1_dim = static_cast<int>(io::read_le<std::uint32_t>(is));
  m.dims.tdnn2_dim = static_cast<int>(io::read_le<std::uint32_t>(is));
  m.dims.embedding_dim = static_cast<int>(io::read_le<std::uint32_t>(is));
  m.focal.alpha = io::read_le<double>(is);
  m.focal.gamma = io::read_le<double>(is);
  const auto digest = io::read_le<std::uint64_t>(is);
  if (config_digest) *config_digest = digest;
  m.input_mean.resize(m.dims.input_dim);
  m.input_scale.resize(m.dims.input_dim);
  read_tensor(is, m.input_mean);
  read_tensor(is, m.input_scale);
  m.params = XVectorParams<float>::zeros(m.dims);
  for_each_tensor([&is](auto &t) { read_tensor(is, t); }, m.params);
  return m;
}

}  // namespace spoofcm
