// src/audio.cpp

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

#include "spoofcm/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "spoofcm/binary_io.hpp"
#include "spoofcm/error.hpp"

namespace spoofcm {

WindowKind parse_window_kind(std::string_view name) {
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "hann") return WindowKind::kHann;
  if (name == "rect") return WindowKind::kRect;
  fail(ErrorCode::kInvalidArgument, "unknown window '" + std::string(name) + "'");
}

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHamming: return "hamming";
    case WindowKind::kHann: return "hann";
    case WindowKind::kRect: return "rect";
  }
  return "?";
}

namespace {

std::uint32_t u32_at(const std::vector<char> &b, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24;
}

std::uint16_t u16_at(const std::vector<char> &b, std::size_t off) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(b[off]) |
      static_cast<unsigned char>(b[off + 1]) << 8);
}

}  // namespace

Waveform read_wav(const std::filesystem::path &path) {
  std::ifstream is = io::open_input(path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
  const std::string where = " in '" + path.string() + "'";
  if (bytes.size() < 12 || std::string(bytes.data(), 4) != "RIFF" ||
      std::string(bytes.data() + 8, 4) != "WAVE")
    fail(ErrorCode::kMalformedHeader, "not a RIFF/WAVE file" + where);

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(bytes.data() + pos, 4);
    const std::uint32_t size = u32_at(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size())
      fail(ErrorCode::kMalformedHeader, "chunk '" + id + "' overruns file" + where);
    if (id == "fmt ") {
      if (size < 16) fail(ErrorCode::kMalformedHeader, "short fmt chunk" + where);
      format = u16_at(bytes, body);
      channels = u16_at(bytes, body + 2);
      rate = u32_at(bytes, body + 4);
      bits = u16_at(bytes, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt)
        fail(ErrorCode::kMalformedHeader, "data chunk before fmt chunk" + where);
      if (format != 1 || bits != 16)
        fail(ErrorCode::kUnsupportedEncoding,
             "only PCM 16-bit is supported (format " + std::to_string(format) +
                 ", " + std::to_string(bits) + " bits)" + where);
      if (channels != 1)
        fail(ErrorCode::kUnsupportedChannelLayout,
             "expected mono, got " + std::to_string(channels) + " channels" + where);
      if (rate == 0) fail(ErrorCode::kMalformedHeader, "zero sample rate" + where);
      Waveform wave;
      wave.sample_rate_hz = static_cast<int>(rate);
      const std::size_t n = size / 2;
      wave.samples.resize(static_cast<Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::int16_t>(u16_at(bytes, body + 2 * i));
        wave.samples(static_cast<Index>(i)) = v / 32768.0;
      }
      return wave;
    }
    pos = body + size + (size & 1u);
  }
  fail(ErrorCode::kMalformedHeader, "missing fmt or data chunk" + where);
}

void write_wav(const std::filesystem::path &path, const Waveform &wave) {
  std::ofstream os = io::open_output(path);
  const auto n = static_cast<std::uint32_t>(wave.samples.size());
  const std::uint32_t data_bytes = 2 * n;
  const auto rate = static_cast<std::uint32_t>(wave.sample_rate_hz);
  os.write("RIFF", 4);
  io::write_le<std::uint32_t>(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  io::write_le<std::uint32_t>(os, 16);
  io::write_le<std::uint16_t>(os, 1);
  io::write_le<std::uint16_t>(os, 1);
  io::write_le<std::uint32_t>(os, rate);
  io::write_le<std::uint32_t>(os, rate * 2);
  io::write_le<std::uint16_t>(os, 2);
  io::write_le<std::uint16_t>(os, 16);
  os.write("data", 4);
  io::write_le<std::uint32_t>(os, data_bytes);
  for (Index i = 0; i < wave.samples.size(); ++i) {
    const double v = std::clamp(std::round(wave.samples(i) * 32768.0), -32768.0, 32767.0);
    io::write_le<std::int16_t>(os, static_cast<std::int16_t>(v));
  }
  if (!os) fail(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

Waveform pre_emphasis(const Waveform &wave, double coeff) {
  return Waveform{pre_emphasis(wave.samples, coeff), wave.sample_rate_hz};
}

VectorXd make_window(WindowKind kind, int n) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "window length must be >= 2");
  VectorXd w(n);
  const double denom = n - 1;
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(2.0 * std::numbers::pi * i / denom);
    switch (kind) {
      case WindowKind::kHamming: w(i) = 0.54 - 0.46 * c; break;
      case WindowKind::kHann: w(i) = 0.5 - 0.5 * c; break;
      case WindowKind::kRect: w(i) = 1.0; break;
    }
  }
  return w;
}

int ms_to_samples(double ms, int sample_rate_hz) {
  return static_cast<int>(std::lround(ms * 1e-3 * sample_rate_hz));
}

FrameMatrix frame_signal(const VectorXd &signal, int n, int h, WindowKind window) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "frame length must be >= 2 samples");
  if (h < 1) fail(ErrorCode::kInvalidArgument, "hop must be >= 1 sample");
  if (signal.size() < n)
    fail(ErrorCode::kSignalTooShort,
         "signal of " + std::to_string(signal.size()) +
             " samples is shorter than one frame (" + std::to_string(n) + ")");
  const Index t = (signal.size() - n) / h + 1;
  const RowVectorX<double> w = make_window(window, n).transpose();
  FrameMatrix fm;
  fm.frame_len_samples = n;
  fm.hop_samples = h;
  fm.frames.resize(t, n);
  for (Index i = 0; i < t; ++i)
    fm.frames.row(i) = signal.segment(i * h, n).transpose().cwiseProduct(w);
  return fm;
}

FrameMatrix frame_and_window(const Waveform &wave, double frame_ms,
                             double hop_ms, WindowKind window) {
  return frame_signal(wave.samples, ms_to_samples(frame_ms, wave.sample_rate_hz),
                      ms_to_samples(hop_ms, wave.sample_rate_hz), window);
}

}  // namespace spoofcm
