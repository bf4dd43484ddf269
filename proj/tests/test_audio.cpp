// tests/test_audio.cpp

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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "spoofcm/audio.hpp"
#include "spoofcm/binary_io.hpp"
#include "spoofcm/error.hpp"
#include "test_util.hpp"

using namespace spoofcm;

namespace {

// Hand-built RIFF header, independent of write_wav.
void write_raw_wav(const std::filesystem::path &path, int channels, int bits, int format,
                   const std::vector<std::int16_t> &samples, int rate = 16000) {
  std::ofstream os(path, std::ios::binary);
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  os.write("RIFF", 4);
  io::write_le<std::uint32_t>(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  io::write_le<std::uint32_t>(os, 16);
  io::write_le<std::uint16_t>(os, static_cast<std::uint16_t>(format));
  io::write_le<std::uint16_t>(os, static_cast<std::uint16_t>(channels));
  io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(rate));
  io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(rate * channels * bits / 8));
  io::write_le<std::uint16_t>(os, static_cast<std::uint16_t>(channels * bits / 8));
  io::write_le<std::uint16_t>(os, static_cast<std::uint16_t>(bits));
  os.write("data", 4);
  io::write_le<std::uint32_t>(os, data_bytes);
  for (auto s : samples) io::write_le<std::int16_t>(os, s);
}

}  // namespace

TEST_CASE("read_wav parses a 16 kHz mono PCM16 header") {
  const auto dir = test::temp_dir("audio_read");
  std::vector<std::int16_t> samples(32000);
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = static_cast<std::int16_t>((i * 37) % 65536 - 32768);
  write_raw_wav(dir / "a.wav", 1, 16, 1, samples);
  const Waveform w = read_wav(dir / "a.wav");
  CHECK(w.sample_rate_hz == 16000);
  REQUIRE(w.size() == 32000);
  for (std::size_t i = 0; i < samples.size(); i += 997)
    CHECK(w.samples(static_cast<Index>(i)) == samples[i] / 32768.0);
}

TEST_CASE("all-zero file gives an all-zero waveform") {
  const auto dir = test::temp_dir("audio_zero");
  write_raw_wav(dir / "z.wav", 1, 16, 1, std::vector<std::int16_t>(500, 0));
  const Waveform w = read_wav(dir / "z.wav");
  CHECK(w.size() == 500);
  CHECK(w.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("unsupported wav layouts are rejected") {
  const auto dir = test::temp_dir("audio_bad");
  write_raw_wav(dir / "stereo.wav", 2, 16, 1, std::vector<std::int16_t>(200, 1));
  write_raw_wav(dir / "float.wav", 1, 16, 3, std::vector<std::int16_t>(200, 1));
  write_raw_wav(dir / "8bit.wav", 1, 8, 1, std::vector<std::int16_t>(200, 1));
  std::ofstream(dir / "junk.wav") << "not a wave file at all";
  auto code_of = [](const std::filesystem::path &p) {
    try {
      read_wav(p);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kConfigError;
  };
  CHECK(code_of(dir / "stereo.wav") == ErrorCode::kUnsupportedChannelLayout);
  CHECK(code_of(dir / "float.wav") == ErrorCode::kUnsupportedEncoding);
  CHECK(code_of(dir / "8bit.wav") == ErrorCode::kUnsupportedEncoding);
  CHECK(code_of(dir / "junk.wav") == ErrorCode::kMalformedHeader);
  CHECK(code_of(dir / "missing.wav") == ErrorCode::kNotFound);
}

TEST_CASE("write_wav then read_wav round-trips within one quantization step") {
  const auto dir = test::temp_dir("audio_roundtrip");
  std::mt19937_64 rng(3);
  Waveform w;
  w.samples = test::random_matrix(rng, 4000, 1, 0.2).col(0).cwiseMax(-1.0).cwiseMin(0.99);
  write_wav(dir / "r.wav", w);
  const Waveform r = read_wav(dir / "r.wav");
  REQUIRE(r.size() == w.size());
  CHECK((r.samples - w.samples).cwiseAbs().maxCoeff() <= 1.0 / 32768.0);
}

TEST_CASE("pre_emphasis recurrence") {
  Waveform w;
  w.samples = VectorXd::Ones(3);
  const VectorXd y = pre_emphasis(w, 0.97).samples;
  CHECK(y(0) == 1.0);
  CHECK(y(1) == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(y(2) == doctest::Approx(0.03).epsilon(1e-12));

  w.samples = VectorXd::Zero(3);
  w.samples(0) = 1.0;
  const VectorXd imp = pre_emphasis(w, 0.97).samples;
  CHECK(imp(0) == 1.0);
  CHECK(imp(1) == -0.97);
  CHECK(imp(2) == 0.0);

  std::mt19937_64 rng(9);
  w.samples = test::random_matrix(rng, 777, 1).col(0);
  CHECK(pre_emphasis(w, 0.0).samples == w.samples);
}

TEST_CASE("frame counts and windows") {
  VectorXd x = VectorXd::LinSpaced(1600, 0.0, 1599.0);
  const FrameMatrix f = frame_signal(x, 400, 160, WindowKind::kRect);
  CHECK(f.num_frames() == 8);
  CHECK(f.frames(3, 0) == 480.0);
  CHECK(f.frames(7, 399) == 7 * 160 + 399);

  const VectorXd ham = make_window(WindowKind::kHamming, 400);
  CHECK(ham(0) == doctest::Approx(0.08).epsilon(1e-12));
  for (int n = 0; n < 400; ++n) CHECK(ham(n) == doctest::Approx(ham(399 - n)).epsilon(1e-14));
  const double expect = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * 123 / 399.0);
  CHECK(ham(123) == doctest::Approx(expect).epsilon(1e-14));

  const VectorXd hann = make_window(WindowKind::kHann, 64);
  CHECK(hann(0) == doctest::Approx(0.0).epsilon(1e-15));
  for (int n = 0; n < 64; ++n) CHECK(hann(n) == doctest::Approx(hann(63 - n)).epsilon(1e-14));

  CHECK_THROWS_AS(frame_signal(VectorXd::Zero(100), 400, 160, WindowKind::kHamming), Error);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> dist(2, 600);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = dist(rng), h = std::max(1, dist(rng) / 3);
    const int len = n + dist(rng) * 3;
    const FrameMatrix m = frame_signal(VectorXd::Ones(len), n, h, WindowKind::kRect);
    CHECK(m.num_frames() == (len - n) / h + 1);
  }

  Waveform w;
  w.samples = VectorXd::Ones(32000);
  const FrameMatrix fw = frame_and_window(w, 25.0, 10.0, WindowKind::kHamming);
  CHECK(fw.frame_len_samples == 400);
  CHECK(fw.hop_samples == 160);
  CHECK(fw.num_frames() == 198);
  CHECK(fw.frames.row(5).transpose().isApprox(ham));
}
