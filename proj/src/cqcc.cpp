// src/cqcc.cpp

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

#include "spoofcm/cqcc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>

#include "spoofcm/error.hpp"

namespace spoofcm {

namespace {

using Complex = std::complex<double>;

struct FrameGrid {
  Index frames;
  int hop;
  int first_center;
};

FrameGrid frame_grid(const Waveform &wave, double hop_ms, double frame_ms) {
  const int frame_len = ms_to_samples(frame_ms, wave.sample_rate_hz);
  const int hop = ms_to_samples(hop_ms, wave.sample_rate_hz);
  if (hop < 1 || frame_len < 2)
    fail(ErrorCode::kInvalidArgument, "bad CQT frame/hop length");
  if (wave.size() < frame_len)
    fail(ErrorCode::kSignalTooShort,
         "signal of " + std::to_string(wave.size()) +
             " samples is shorter than one analysis frame");
  return {(wave.size() - frame_len) / hop + 1, hop, frame_len / 2};
}

void check_spec(const Waveform &wave, const CqtSpec &spec) {
  if (spec.sample_rate_hz != wave.sample_rate_hz)
    fail(ErrorCode::kInvalidArgument, "CQT spec sample rate differs from the waveform");
  if (spec.num_bins() == 0) fail(ErrorCode::kBandOutOfRange, "empty CQT spec");
  // The highest bin has the shortest kernel; nothing useful can be said about
  // a signal that does not cover even that one.
  if (wave.size() < spec.window_lengths.back())
    fail(ErrorCode::kSignalTooShort, "signal shorter than the shortest CQT kernel");
}

void append_number(std::string &out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

// prefix[i] = sum_{m < i} x[m] e^{-j theta m}
void running_sum(const VectorXd &x, double theta, std::vector<Complex> &prefix) {
  const Index n = x.size();
  prefix.resize(static_cast<std::size_t>(n) + 1);
  prefix[0] = 0.0;
  const Complex step = std::polar(1.0, -theta);
  Complex phasor = 1.0;
  Complex acc = 0.0;
  for (Index m = 0; m < n; ++m) {
    if ((m & 255) == 0) phasor = std::polar(1.0, -theta * static_cast<double>(m));
    acc += x(m) * phasor;
    prefix[static_cast<std::size_t>(m) + 1] = acc;
    phasor *= step;
  }
}

}  // namespace

CqtSpec make_cqt_spec(int sample_rate_hz, double f_min_hz, double f_max_hz,
                      int bins_per_octave) {
  if (bins_per_octave < 1)
    fail(ErrorCode::kInvalidArgument, "bins per octave must be >= 1");
  if (!(f_min_hz > 0.0 && f_min_hz < f_max_hz && f_max_hz <= sample_rate_hz / 2.0))
    fail(ErrorCode::kBandOutOfRange,
         "CQT band must satisfy 0 < f_min < f_max <= Nyquist");
  CqtSpec spec;
  spec.sample_rate_hz = sample_rate_hz;
  spec.f_min_hz = f_min_hz;
  spec.f_max_hz = f_max_hz;
  spec.bins_per_octave = bins_per_octave;
  spec.quality = 1.0 / (std::exp2(1.0 / bins_per_octave) - 1.0);
  const double octaves = std::log2(f_max_hz / f_min_hz);
  auto k = static_cast<Index>(std::floor(bins_per_octave * octaves + 1e-9)) + 1;
  while (k > 1 && f_min_hz * std::exp2(static_cast<double>(k - 1) / bins_per_octave) >
                      f_max_hz * (1.0 + 1e-12))
    --k;
  spec.center_freqs_hz.resize(k);
  spec.window_lengths.resize(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const double f = f_min_hz * std::exp2(static_cast<double>(i) / bins_per_octave);
    spec.center_freqs_hz(i) = f;
    spec.window_lengths[static_cast<std::size_t>(i)] =
        static_cast<int>(std::ceil(spec.quality * sample_rate_hz / f));
  }
  return spec;
}

MatrixXd cqt(const Waveform &wave, const CqtSpec &spec, double hop_ms,
             double frame_ms) {
  check_spec(wave, spec);
  const FrameGrid grid = frame_grid(wave, hop_ms, frame_ms);
  const Index len = wave.size();
  MatrixXd out(grid.frames, spec.num_bins());
  std::vector<Complex> p_center, p_lower, p_upper;
  for (Index k = 0; k < spec.num_bins(); ++k) {
    const int n = spec.window_lengths[static_cast<std::size_t>(k)];
    const double omega = 2.0 * std::numbers::pi * spec.center_freqs_hz(k) /
                         spec.sample_rate_hz;
    const double beta = 2.0 * std::numbers::pi / (n - 1);
    // 0.54 - 0.46 cos(beta n) = 0.54 - 0.23 e^{j beta n} - 0.23 e^{-j beta n}
    running_sum(wave.samples, omega, p_center);
    running_sum(wave.samples, omega - beta, p_lower);
    running_sum(wave.samples, omega + beta, p_upper);
    for (Index t = 0; t < grid.frames; ++t) {
      const Index start = t * grid.hop + grid.first_center - n / 2;
      const Index a = std::clamp<Index>(start, 0, len);
      const Index b = std::clamp<Index>(start + n, 0, len);
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      const double s = static_cast<double>(start);
      const Complex sum =
          0.54 * std::polar(1.0, omega * s) * (p_center[ub] - p_center[ua]) -
          0.23 * std::polar(1.0, (omega - beta) * s) * (p_lower[ub] - p_lower[ua]) -
          0.23 * std::polar(1.0, (omega + beta) * s) * (p_upper[ub] - p_upper[ua]);
      out(t, k) = std::abs(sum) / n;
    }
  }
  return out;
}

MatrixXd cqt_direct(const Waveform &wave, const CqtSpec &spec, double hop_ms,
                    double frame_ms) {
  check_spec(wave, spec);
  const FrameGrid grid = frame_grid(wave, hop_ms, frame_ms);
  const Index len = wave.size();
  MatrixXd out(grid.frames, spec.num_bins());
  for (Index k = 0; k < spec.num_bins(); ++k) {
    const int n = spec.window_lengths[static_cast<std::size_t>(k)];
    const VectorXd win = make_window(WindowKind::kHamming, n);
    const double omega = 2.0 * std::numbers::pi * spec.center_freqs_hz(k) /
                         spec.sample_rate_hz;
    for (Index t = 0; t < grid.frames; ++t) {
      const Index start = t * grid.hop + grid.first_center - n / 2;
      Complex sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const Index m = start + i;
        if (m < 0 || m >= len) continue;
        sum += wave.samples(m) * win(i) * std::polar(1.0, -omega * i);
      }
      out(t, k) = std::abs(sum) / n;
    }
  }
  return out;
}

VectorXd resample_geometric_to_linear(const VectorXd &values,
                                      const VectorXd &freqs_hz, int num_points) {
  const Index k = values.size();
  if (k < 2 || num_points < 2 || freqs_hz.size() != k)
    fail(ErrorCode::kInvalidArgument,
         "resampling needs >= 2 input bins, matching frequencies and >= 2 outputs");
  const VectorXd log_f = freqs_hz.array().log2().matrix();
  const double f0 = freqs_hz(0), f1 = freqs_hz(k - 1);
  VectorXd out(num_points);
  out(0) = values(0);
  out(num_points - 1) = values(k - 1);
  Index seg = 0;
  for (int j = 1; j + 1 < num_points; ++j) {
    const double u = f0 + (f1 - f0) * j / (num_points - 1);
    const double lu = std::log2(u);
    while (seg + 2 < k && log_f(seg + 1) < lu) ++seg;
    const double frac = (lu - log_f(seg)) / (log_f(seg + 1) - log_f(seg));
    out(j) = values(seg) + frac * (values(seg + 1) - values(seg));
  }
  return out;
}

std::string CqccConfig::canonical() const {
  std::string s = "cqcc";
  const auto field = [&s](const char *name, double v) {
    s += ';';
    s += name;
    s += '=';
    append_number(s, v);
  };
  field("f_min_hz", f_min_hz);
  field("f_max_hz", f_max_hz);
  field("bins_per_octave", bins_per_octave);
  field("resample_points", resample_points);
  field("num_ceps", num_ceps);
  field("frame_ms", frame_ms);
  field("hop_ms", hop_ms);
  field("power_floor", power_floor);
  field("deltas", deltas);
  field("delta_window", delta_window);
  field("keep_c0", keep_c0);
  return s;
}

std::uint64_t CqccConfig::digest() const {
  return Fnv1a().update(canonical()).value();
}

FeatureMatrix extract_cqcc(const Waveform &wave, const CqccConfig &cfg) {
  const double f_max = cfg.f_max_hz > 0.0 ? cfg.f_max_hz : wave.sample_rate_hz / 2.0;
  const CqtSpec spec =
      make_cqt_spec(wave.sample_rate_hz, cfg.f_min_hz, f_max, cfg.bins_per_octave);
  if (cfg.num_ceps > cfg.resample_points)
    fail(ErrorCode::kTooManyCeps, "more cepstra than resampled points");
  const MatrixXd mag = cqt(wave, spec, cfg.hop_ms, cfg.frame_ms);
  const MatrixXd log_power = mag.array().square().max(cfg.power_floor).log().matrix();

  MatrixXd uniform(log_power.rows(), cfg.resample_points);
  for (Index t = 0; t < log_power.rows(); ++t)
    uniform.row(t) = resample_geometric_to_linear(log_power.row(t).transpose(),
                                                  spec.center_freqs_hz,
                                                  cfg.resample_points)
                         .transpose();

  FeatureMatrix feats;
  feats.kind = FeatureKind::kCQCC;
  feats.values = uniform * dct_matrix(cfg.num_ceps, cfg.resample_points).transpose();
  if (!cfg.keep_c0) {
    if (feats.dim() < 2) fail(ErrorCode::kInvalidArgument, "dropping c0 leaves no cepstra");
    MatrixXd rest = feats.values.rightCols(feats.dim() - 1);
    feats.values = std::move(rest);
  }
  if (cfg.deltas) feats = append_deltas(feats, cfg.delta_window);
  feats.kind = FeatureKind::kCQCC;
  feats.config_digest = cfg.digest();
  return feats;
}

}  // namespace spoofcm
