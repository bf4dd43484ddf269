// include/spoofcm/binary_io.hpp

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

#ifndef SPOOFCM_BINARY_IO_HPP_
#define SPOOFCM_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "spoofcm/error.hpp"

namespace spoofcm::io {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <typename T>
T byteswap_if_needed(T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
  }
  return value;
}

template <typename T>
void write_le(std::ostream &os, T value) {
  value = byteswap_if_needed(value);
  os.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream &is) {
  T value{};
  is.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!is) fail(ErrorCode::kBadFormat, "unexpected end of binary stream");
  return byteswap_if_needed(value);
}

/// u16 length prefix followed by raw bytes.
void write_string(std::ostream &os, std::string_view s);
std::string read_string(std::istream &is);

void expect_magic(std::istream &is, std::string_view magic);

std::ofstream open_output(const std::filesystem::path &path);
std::ifstream open_input(const std::filesystem::path &path);

}  // namespace spoofcm::io

#endif  // SPOOFCM_BINARY_IO_HPP_
