// src/spectral.cpp

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

#include "spoofcm/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "spoofcm/error.hpp"

namespace spoofcm {

std::string_view to_string(FilterbankKind kind) {
  switch (kind) {
    case FilterbankKind::kLinear: return "linear";
    case FilterbankKind::kMel: return "mel";
    case FilterbankKind::kInverseMel: return "inverse-mel";
  }
  return "?";
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// M+2 band edges, equally spaced on the warped axis.
std::vector<double> band_edges(FilterbankKind kind, int m, double f_min,
                               double f_max) {
  std::vector<double> edges(m + 2);
  if (kind == FilterbankKind::kLinear) {
    const double step = (f_max - f_min) / (m + 1);
    for (int i = 0; i < m + 2; ++i) edges[i] = f_min + i * step;
    edges[m + 1] = f_max;
    return edges;
  }
  const double lo = hz_to_mel(f_min), hi = hz_to_mel(f_max);
  const double step = (hi - lo) / (m + 1);
  for (int i = 0; i < m + 2; ++i) edges[i] = mel_to_hz(lo + i * step);
  edges[0] = f_min;
  edges[m + 1] = f_max;
  if (kind == FilterbankKind::kInverseMel) {
    // Mirror about the band midpoint: dense filters at high frequencies.
    std::vector<double> mirrored(m + 2);
    for (int i = 0; i < m + 2; ++i) mirrored[i] = f_min + f_max - edges[m + 1 - i];
    edges = std::move(mirrored);
  }
  return edges;
}

FeatureKind energy_kind(FilterbankKind kind) {
  switch (kind) {
    case FilterbankKind::kLinear: return FeatureKind::kLFBE;
    case FilterbankKind::kMel: return FeatureKind::kMFBE;
    case FilterbankKind::kInverseMel: return FeatureKind::kIMFBE;
  }
  return FeatureKind::kLFBE;
}

FeatureKind cepstral_kind(FeatureKind energy) {
  switch (energy) {
    case FeatureKind::kLFBE: return FeatureKind::kLFCC;
    case FeatureKind::kMFBE: return FeatureKind::kMFCC;
    case FeatureKind::kIMFBE: return FeatureKind::kIMFCC;
    default: return energy;
  }
}

void append_number(std::string &out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

MatrixXd power_spectrum(const FrameMatrix &frames, int nfft) {
  const int n = frames.frame_len_samples > 0
                    ? frames.frame_len_samples
                    : static_cast<int>(frames.frames.cols());
  if (!is_power_of_two(nfft) || nfft < n)
    fail(ErrorCode::kBadFftSize,
         "nfft " + std::to_string(nfft) + " must be a power of two >= frame length " +
             std::to_string(n));
  const int bins = nfft / 2 + 1;
  MatrixXd out(frames.frames.rows(), bins);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buf(nfft, 0.0);
  std::vector<std::complex<double>> spec;
  for (Index t = 0; t < frames.frames.rows(); ++t) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (Index i = 0; i < frames.frames.cols(); ++i) buf[i] = frames.frames(t, i);
    fft.fwd(spec, buf);
    for (int k = 0; k < bins; ++k) out(t, k) = std::norm(spec[k]);
  }
  return out;
}

FilterbankSpec build_filterbank(FilterbankKind kind, int num_filters, int nfft,
                                int sample_rate_hz, double f_min_hz,
                                double f_max_hz) {
  if (num_filters < 2)
    fail(ErrorCode::kInvalidArgument, "filterbank needs at least 2 filters");
  if (!is_power_of_two(nfft))
    fail(ErrorCode::kBadFftSize, "nfft must be a power of two");
  if (!(f_min_hz >= 0.0 && f_min_hz < f_max_hz && f_max_hz <= sample_rate_hz / 2.0))
    fail(ErrorCode::kBadBand, "filterbank band must satisfy 0 <= f_min < f_max <= Nyquist");

  FilterbankSpec fb;
  fb.kind = kind;
  fb.num_filters = num_filters;
  fb.nfft = nfft;
  fb.sample_rate_hz = sample_rate_hz;
  fb.f_min_hz = f_min_hz;
  fb.f_max_hz = f_max_hz;

  const std::vector<double> edges = band_edges(kind, num_filters, f_min_hz, f_max_hz);
  const int bins = nfft / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate_hz) / nfft;
  fb.centers_hz.resize(num_filters);
  fb.weights = MatrixXd::Zero(num_filters, bins);
  for (int m = 0; m < num_filters; ++m) {
    const double lo = edges[m], c = edges[m + 1], hi = edges[m + 2];
    fb.centers_hz(m) = c;
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      if (f > lo && f < c)
        fb.weights(m, k) = (f - lo) / (c - lo);
      else if (f >= c && f < hi)
        fb.weights(m, k) = (hi - f) / (hi - c);
    }
    const double peak = fb.weights.row(m).maxCoeff();
    if (peak > 0.0) {
      fb.weights.row(m) /= peak;
    } else {
      // Narrower than one bin: collapse onto the nearest bin.
      const int k = std::clamp(static_cast<int>(std::lround(c / bin_hz)), 0, bins - 1);
      fb.weights(m, k) = 1.0;
    }
  }
  return fb;
}

FeatureMatrix filterbank_log_energies(const MatrixXd &power,
                                      const FilterbankSpec &fb, double floor) {
  if (power.cols() != fb.weights.cols())
    fail(ErrorCode::kDimensionMismatch,
         "power spectrum has " + std::to_string(power.cols()) +
             " bins, filterbank expects " + std::to_string(fb.weights.cols()));
  FeatureMatrix out;
  out.kind = energy_kind(fb.kind);
  out.values = (power * fb.weights.transpose()).array().max(floor).log().matrix();
  return out;
}

MatrixXd dct_matrix(int num_ceps, int num_inputs) {
  MatrixXd d(num_ceps, num_inputs);
  for (int c = 0; c < num_ceps; ++c) {
    const double scale = std::sqrt((c == 0 ? 1.0 : 2.0) / num_inputs);
    for (int m = 0; m < num_inputs; ++m)
      d(c, m) = scale * std::cos(std::numbers::pi * c * (m + 0.5) / num_inputs);
  }
  return d;
}

FeatureMatrix dct_cepstra(const FeatureMatrix &log_energies, int num_ceps) {
  const auto m = static_cast<int>(log_energies.dim());
  if (num_ceps < 1 || num_ceps > m)
    fail(ErrorCode::kTooManyCeps, "cannot keep " + std::to_string(num_ceps) +
                                      " cepstra from " + std::to_string(m) + " filters");
  FeatureMatrix out;
  out.kind = cepstral_kind(log_energies.kind);
  out.config_digest = log_energies.config_digest;
  out.values = log_energies.values * dct_matrix(num_ceps, m).transpose();
  return out;
}

MatrixXd compute_deltas(const MatrixXd &values, int window) {
  const Index t_count = values.rows();
  double denom = 0.0;
  for (int tau = 1; tau <= window; ++tau) denom += tau * tau;
  denom *= 2.0;
  MatrixXd delta = MatrixXd::Zero(t_count, values.cols());
  for (Index t = 0; t < t_count; ++t) {
    for (int tau = 1; tau <= window; ++tau) {
      const Index ahead = std::min<Index>(t + tau, t_count - 1);
      const Index behind = std::max<Index>(t - tau, 0);
      delta.row(t) += tau * (values.row(ahead) - values.row(behind));
    }
  }
  return delta / denom;
}

FeatureMatrix append_deltas(const FeatureMatrix &features, int window) {
  if (window < 1) fail(ErrorCode::kInvalidArgument, "delta window must be >= 1");
  const MatrixXd d1 = compute_deltas(features.values, window);
  const MatrixXd d2 = compute_deltas(d1, window);
  FeatureMatrix out;
  out.kind = features.kind;
  out.config_digest = features.config_digest;
  out.values.resize(features.num_frames(), 3 * features.dim());
  out.values << features.values, d1, d2;
  return out;
}

void apply_cmvn(FeatureMatrix &features) {
  const RowVectorX<double> mean = features.values.colwise().mean();
  features.values.rowwise() -= mean;
  const RowVectorX<double> sd =
      (features.values.array().square().colwise().mean()).sqrt().max(1e-10).matrix();
  features.values.array().rowwise() /= sd.array();
}

FilterbankKind filterbank_kind_for(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kLFBE:
    case FeatureKind::kLFCC: return FilterbankKind::kLinear;
    case FeatureKind::kMFBE:
    case FeatureKind::kMFCC: return FilterbankKind::kMel;
    case FeatureKind::kIMFBE:
    case FeatureKind::kIMFCC: return FilterbankKind::kInverseMel;
    case FeatureKind::kCQCC: break;
  }
  fail(ErrorCode::kInvalidArgument, "CQCC is not a filterbank feature");
}

SpectralConfig SpectralConfig::defaults(FeatureKind kind) {
  SpectralConfig cfg;
  cfg.kind = kind;
  cfg.num_filters = is_cepstral(kind) ? 20 : 40;
  return cfg;
}

std::string SpectralConfig::canonical() const {
  std::string s = "spectral;kind=";
  s += to_string(kind);
  const auto field = [&s](const char *name, double v) {
    s += ';';
    s += name;
    s += '=';
    append_number(s, v);
  };
  field("pre_emphasis", pre_emphasis);
  field("frame_ms", frame_ms);
  field("hop_ms", hop_ms);
  s += ";window=";
  s += to_string(window);
  field("nfft", nfft);
  field("num_filters", num_filters);
  field("num_ceps", num_ceps);
  field("f_min_hz", f_min_hz);
  field("f_max_hz", f_max_hz);
  field("energy_floor", energy_floor);
  field("deltas", deltas);
  field("delta_window", delta_window);
  field("keep_c0", keep_c0);
  field("cmvn", cmvn);
  return s;
}

std::uint64_t SpectralConfig::digest() const {
  return Fnv1a().update(canonical()).value();
}

MatrixXd extract_power_spectrum(const Waveform &wave, const SpectralConfig &cfg) {
  const Waveform emphasized = pre_emphasis(wave, cfg.pre_emphasis);
  const FrameMatrix frames =
      frame_and_window(emphasized, cfg.frame_ms, cfg.hop_ms, cfg.window);
  return power_spectrum(frames, cfg.nfft);
}

FeatureMatrix extract_spectral_feature(const Waveform &wave,
                                       const SpectralConfig &cfg) {
  const FilterbankKind fb_kind = filterbank_kind_for(cfg.kind);
  const double f_max = cfg.f_max_hz > 0.0 ? cfg.f_max_hz : wave.sample_rate_hz / 2.0;
  const FilterbankSpec fb = build_filterbank(fb_kind, cfg.num_filters, cfg.nfft,
                                             wave.sample_rate_hz, cfg.f_min_hz, f_max);
  FeatureMatrix feats =
      filterbank_log_energies(extract_power_spectrum(wave, cfg), fb, cfg.energy_floor);
  if (is_cepstral(cfg.kind)) {
    feats = dct_cepstra(feats, cfg.num_ceps);
    if (!cfg.keep_c0) {
      if (feats.dim() < 2)
        fail(ErrorCode::kInvalidArgument, "dropping c0 leaves no cepstra");
      MatrixXd rest = feats.values.rightCols(feats.dim() - 1);
      feats.values = std::move(rest);
    }
  }
  if (cfg.cmvn) apply_cmvn(feats);
  if (cfg.deltas) feats = append_deltas(feats, cfg.delta_window);
  feats.kind = cfg.kind;
  feats.config_digest = cfg.digest();
  return feats;
}

}  // namespace spoofcm
