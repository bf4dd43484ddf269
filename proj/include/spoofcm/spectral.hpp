// include/spoofcm/spectral.hpp

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

#ifndef SPOOFCM_SPECTRAL_HPP_
#define SPOOFCM_SPECTRAL_HPP_

#include <cstdint>
#include <string>

#include "spoofcm/audio.hpp"
#include "spoofcm/types.hpp"

namespace spoofcm {

/// T x D feature values plus provenance.
struct FeatureMatrix {
  MatrixXd values;
  FeatureKind kind = FeatureKind::kMFCC;
  std::uint64_t config_digest = 0;

  Index num_frames() const { return values.rows(); }
  Index dim() const { return values.cols(); }
};

enum class FilterbankKind { kLinear, kMel, kInverseMel };

std::string_view to_string(FilterbankKind kind);

/// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// M triangular filters over the nfft/2+1 one-sided bins.
struct FilterbankSpec {
  FilterbankKind kind = FilterbankKind::kMel;
  int num_filters = 0;
  int nfft = 0;
  int sample_rate_hz = 0;
  double f_min_hz = 0.0;
  double f_max_hz = 0.0;
  VectorXd centers_hz;
  MatrixXd weights;  // M x (nfft/2 + 1)
};

/// T x (nfft/2+1) periodogram |DFT(frame zero-padded to nfft)|^2.
MatrixXd power_spectrum(const FrameMatrix &frames, int nfft);

FilterbankSpec build_filterbank(FilterbankKind kind, int num_filters, int nfft,
                                int sample_rate_hz, double f_min_hz,
                                double f_max_hz);

/// ln(max(P * W^T, floor)); the kind tag follows the filterbank family.
FeatureMatrix filterbank_log_energies(const MatrixXd &power,
                                      const FilterbankSpec &fb, double floor);

/// C x M orthonormal DCT-II basis (rows are basis vectors).
MatrixXd dct_matrix(int num_ceps, int num_inputs);

/// Orthonormal DCT-II along the filter axis keeping coefficients 0..C-1.
FeatureMatrix dct_cepstra(const FeatureMatrix &log_energies, int num_ceps);

/// Regression deltas with edge replication.
MatrixXd compute_deltas(const MatrixXd &values, int window);

/// statics | delta | delta-delta.
FeatureMatrix append_deltas(const FeatureMatrix &features, int window);

/// Per-utterance mean and variance normalisation of every column.
void apply_cmvn(FeatureMatrix &features);

struct SpectralConfig {
  FeatureKind kind = FeatureKind::kMFCC;
  double pre_emphasis = 0.97;
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  WindowKind window = WindowKind::kHamming;
  int nfft = 512;
  int num_filters = 20;
  int num_ceps = 20;
  double f_min_hz = 0.0;
  double f_max_hz = 0.0;  // 0 selects Nyquist
  double energy_floor = 1e-10;
  bool deltas = true;
  int delta_window = 2;
  bool keep_c0 = true;
  bool cmvn = false;

  /// Defaults per kind: 20 filters for cepstra, 40 for filterbank energies.
  static SpectralConfig defaults(FeatureKind kind);

  /// Canonical text of every field; hashed into FeatureMatrix::config_digest.
  std::string canonical() const;
  std::uint64_t digest() const;
};

FilterbankKind filterbank_kind_for(FeatureKind kind);

/// Stages up to and including the power spectrum; shared by all six kinds.
MatrixXd extract_power_spectrum(const Waveform &wave, const SpectralConfig &cfg);

FeatureMatrix extract_spectral_feature(const Waveform &wave,
                                       const SpectralConfig &cfg);

}  // namespace spoofcm

#endif  // SPOOFCM_SPECTRAL_HPP_
