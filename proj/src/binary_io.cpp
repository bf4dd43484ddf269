// src/binary_io.cpp

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

#include "spoofcm/binary_io.hpp"

#include <fstream>
#include <limits>

namespace spoofcm::io {

void write_string(std::ostream &os, std::string_view s) {
  if (s.size() > std::numeric_limits<std::uint16_t>::max())
    fail(ErrorCode::kInvalidArgument, "string too long for binary header");
  write_le<std::uint16_t>(os, static_cast<std::uint16_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream &is) {
  const auto n = read_le<std::uint16_t>(is);
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) fail(ErrorCode::kBadFormat, "truncated string in binary stream");
  return s;
}

void expect_magic(std::istream &is, std::string_view magic) {
  std::string got(magic.size(), '\0');
  is.read(got.data(), static_cast<std::streamsize>(got.size()));
  if (!is || got != magic)
    fail(ErrorCode::kBadFormat, "bad magic, expected '" + std::string(magic) + "'");
}

std::ofstream open_output(const std::filesystem::path &path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_input(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path))
    fail(ErrorCode::kNotFound, "no such file '" + path.string() + "'");
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return is;
}

}  // namespace spoofcm::io
