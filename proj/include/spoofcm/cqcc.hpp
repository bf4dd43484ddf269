// include/spoofcm/cqcc.hpp

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

#ifndef SPOOFCM_CQCC_HPP_
#define SPOOFCM_CQCC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spoofcm/audio.hpp"
#include "spoofcm/spectral.hpp"

namespace spoofcm {

/// Geometric bin layout of a constant-Q transform.
struct CqtSpec {
  int sample_rate_hz = 0;
  double f_min_hz = 0.0;
  double f_max_hz = 0.0;
  int bins_per_octave = 0;
  double quality = 0.0;       // Q = 1 / (2^(1/B) - 1)
  VectorXd center_freqs_hz;   // f_k = f_min * 2^(k/B)
  std::vector<int> window_lengths;  // N_k = ceil(Q * fs / f_k)

  Index num_bins() const { return center_freqs_hz.size(); }
};

/// K = floor(B * log2(f_max / f_min)) + 1. Throws kBandOutOfRange unless
/// 0 < f_min < f_max <= Nyquist.
CqtSpec make_cqt_spec(int sample_rate_hz, double f_min_hz, double f_max_hz,
                      int bins_per_octave);

/// T x K constant-Q magnitudes. Frame t is centred on sample
/// t*hop + frame_len/2 (the same frame grid as the STFT front-ends); bin k
/// uses a Hamming window of N_k samples centred there, normalised by N_k.
/// Samples outside the signal count as zero.
///
/// Each windowed inner product is evaluated exactly by splitting the
/// Hamming window into three complex exponentials and taking differences of
/// running sums, so the cost per bin is linear in the signal length.
MatrixXd cqt(const Waveform &wave, const CqtSpec &spec, double hop_ms,
             double frame_ms = 25.0);

/// Reference evaluation of cqt() by explicit per-bin inner products.
MatrixXd cqt_direct(const Waveform &wave, const CqtSpec &spec, double hop_ms,
                    double frame_ms = 25.0);

/// Interpolates values sampled at geometric frequencies `freqs_hz` onto
/// `num_points` uniformly spaced frequencies spanning [freqs.front(),
/// freqs.back()]. Interpolation is piecewise linear in log2(f), so values that
/// are linear in log-frequency are reproduced exactly.
VectorXd resample_geometric_to_linear(const VectorXd &values,
                                      const VectorXd &freqs_hz, int num_points);

struct CqccConfig {
  double f_min_hz = 15.0;
  double f_max_hz = 0.0;  // 0 selects Nyquist
  int bins_per_octave = 96;
  int resample_points = 1024;
  int num_ceps = 20;
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double power_floor = 1e-10;
  bool deltas = true;
  int delta_window = 2;
  bool keep_c0 = true;

  std::string canonical() const;
  std::uint64_t digest() const;
};

FeatureMatrix extract_cqcc(const Waveform &wave, const CqccConfig &cfg);

}  // namespace spoofcm

#endif  // SPOOFCM_CQCC_HPP_
