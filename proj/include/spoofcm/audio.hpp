// include/spoofcm/audio.hpp

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

#ifndef SPOOFCM_AUDIO_HPP_
#define SPOOFCM_AUDIO_HPP_

#include <filesystem>

#include "spoofcm/types.hpp"

namespace spoofcm {

/// Mono audio with amplitudes in [-1, 1].
struct Waveform {
  VectorXd samples;
  int sample_rate_hz = 16000;

  Index size() const { return samples.size(); }
};

/// T x N matrix of windowed frames; row t covers samples [t*hop, t*hop+N).
struct FrameMatrix {
  MatrixXd frames;
  int frame_len_samples = 0;
  int hop_samples = 0;

  Index num_frames() const { return frames.rows(); }
};

enum class WindowKind { kHamming, kHann, kRect };

WindowKind parse_window_kind(std::string_view name);
std::string_view to_string(WindowKind kind);

/// Reads RIFF/WAVE, PCM signed 16-bit little-endian, mono. Samples are
/// scaled by 1/32768.
Waveform read_wav(const std::filesystem::path &path);

/// Writes PCM16 mono; samples are clipped to [-1, 1) and rounded.
void write_wav(const std::filesystem::path &path, const Waveform &wave);

/// y[0] = x[0], y[n] = x[n] - coeff * x[n-1].
template <typename Derived>
VectorX<typename Derived::Scalar> pre_emphasis(
    const Eigen::MatrixBase<Derived> &x, typename Derived::Scalar coeff) {
  VectorX<typename Derived::Scalar> y(x.size());
  if (x.size() == 0) return y;
  y(0) = x(0);
  const Index n = x.size();
  y.tail(n - 1) = x.tail(n - 1) - coeff * x.head(n - 1);
  return y;
}

Waveform pre_emphasis(const Waveform &wave, double coeff);

/// Symmetric window of length n (n >= 2).
VectorXd make_window(WindowKind kind, int n);

int ms_to_samples(double ms, int sample_rate_hz);

/// Frames `signal` with frame length n and hop h, dropping trailing samples
/// that do not fill a frame. Throws kSignalTooShort if signal.size() < n.
FrameMatrix frame_signal(const VectorXd &signal, int n, int h, WindowKind window);

FrameMatrix frame_and_window(const Waveform &wave, double frame_ms,
                             double hop_ms, WindowKind window);

}  // namespace spoofcm

#endif  // SPOOFCM_AUDIO_HPP_
