// src/synth.cpp

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

#include "spoofcm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "spoofcm/binary_io.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/parallel.hpp"
#include "spoofcm/spectral.hpp"

namespace spoofcm {

namespace {

// Direct-form-I biquad with RBJ cookbook coefficients.
class Biquad {
 public:
  static Biquad bandpass(double f0, double q, double fs) {
    const double w = 2.0 * std::numbers::pi * f0 / fs;
    const double alpha = std::sin(w) / (2.0 * q);
    return Biquad(alpha, 0.0, -alpha, 1.0 + alpha, -2.0 * std::cos(w), 1.0 - alpha);
  }
  static Biquad lowpass(double f0, double q, double fs) {
    const double w = 2.0 * std::numbers::pi * f0 / fs;
    const double alpha = std::sin(w) / (2.0 * q);
    const double c = std::cos(w);
    return Biquad((1.0 - c) / 2.0, 1.0 - c, (1.0 - c) / 2.0, 1.0 + alpha, -2.0 * c,
                  1.0 - alpha);
  }

  VectorXd filter(const VectorXd &x) const {
    VectorXd y(x.size());
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    for (Index n = 0; n < x.size(); ++n) {
      const double v = b0_ * x(n) + b1_ * x1 + b2_ * x2 - a1_ * y1 - a2_ * y2;
      x2 = x1;
      x1 = x(n);
      y2 = y1;
      y1 = v;
      y(n) = v;
    }
    return y;
  }

 private:
  Biquad(double b0, double b1, double b2, double a0, double a1, double a2)
      : b0_(b0 / a0), b1_(b1 / a0), b2_(b2 / a0), a1_(a1 / a0), a2_(a2 / a0) {}
  double b0_, b1_, b2_, a1_, a2_;
};

double mu_law_roundtrip(double x, double mu, int bits) {
  const double c = std::copysign(std::log1p(mu * std::abs(x)) / std::log1p(mu), x);
  const double levels = std::exp2(bits - 1);
  const double q = std::round(c * levels) / levels;
  return std::copysign(std::expm1(std::abs(q) * std::log1p(mu)) / mu, q);
}

const char *subset_prefix(Subset s) {
  switch (s) {
    case Subset::kTrain: return "T";
    case Subset::kDev: return "D";
    case Subset::kEval: return "E";
  }
  return "?";
}

// Fraction of long-term power above `cutoff_hz`.
double high_band_fraction(const Waveform &w, double cutoff_hz) {
  SpectralConfig cfg;
  cfg.pre_emphasis = 0.0;
  const MatrixXd p = extract_power_spectrum(w, cfg);
  const VectorXd mean = p.colwise().mean().transpose();
  const auto first = static_cast<Index>(std::ceil(cutoff_hz * cfg.nfft / w.sample_rate_hz));
  return mean.tail(mean.size() - first).sum() / std::max(mean.sum(), 1e-300);
}

}  // namespace

void SynthConfig::validate() const {
  for (const auto &c : counts)
    if (c.bonafide <= 0 || c.spoof <= 0)
      fail(ErrorCode::kInvalidArgument, "every subset needs positive bonafide and spoof counts");
  if (sample_rate_hz <= 0 || utterance_seconds <= 0.0)
    fail(ErrorCode::kInvalidArgument, "sample rate and duration must be positive");
  if (num_speakers < 1 || num_attacks < 1)
    fail(ErrorCode::kInvalidArgument, "need at least one speaker and one attack");
  if (bonafide.formant1_hz == spoof.formant1_hz && bonafide.formant2_hz == spoof.formant2_hz &&
      bonafide.lowpass_hz == spoof.lowpass_hz && bonafide.companding_mu == spoof.companding_mu)
    fail(ErrorCode::kInvalidArgument, "class recipes must differ");
}

Waveform synthesize_utterance(const SynthConfig &cfg, Subset subset, std::size_t index,
                              Label label, int speaker, int attack) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                    static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(subset), static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto fs = static_cast<double>(cfg.sample_rate_hz);
  const auto n = static_cast<Index>(std::lround(cfg.utterance_seconds * fs));
  const ClassRecipe &r = label == Label::kBonafide ? cfg.bonafide : cfg.spoof;

  // Speaker-dependent formant scaling plus a small per-utterance jitter.
  const double speaker_scale = 0.9 + 0.2 * (speaker + 0.5) / cfg.num_speakers;
  const double attack_scale = label == Label::kSpoof ? 1.0 + 0.03 * attack : 1.0;
  const double jitter = 1.0 + 0.04 * (unit(rng) - 0.5);
  const double scale = speaker_scale * attack_scale * jitter;
  const double nyquist_guard = 0.45 * fs;

  VectorXd source(n);
  double state = 0.0;
  for (Index i = 0; i < n; ++i) {
    state = normal(rng) + 0.7 * state;
    source(i) = state;
  }
  const double f1 = std::min(r.formant1_hz * scale, nyquist_guard);
  const double f2 = std::min(r.formant2_hz * scale, nyquist_guard);
  VectorXd y = r.direct_gain * source +
               4.0 * Biquad::bandpass(f1, r.resonator_q, fs).filter(source) +
               2.0 * Biquad::bandpass(f2, r.resonator_q, fs).filter(source);

  const double phase = 2.0 * std::numbers::pi * unit(rng);
  for (Index i = 0; i < n; ++i)
    y(i) *= 1.0 + r.modulation_depth *
                      std::sin(2.0 * std::numbers::pi * r.modulation_hz * i / fs + phase);

  const auto normalize = [](VectorXd &v, double rms) {
    const double cur = std::sqrt(v.squaredNorm() / std::max<Index>(v.size(), 1));
    if (cur > 0.0) v *= rms / cur;
    v = v.cwiseMax(-0.99).cwiseMin(0.99);
  };
  if (r.lowpass_hz > 0.0) {
    const Biquad lp = Biquad::lowpass(std::min(r.lowpass_hz, nyquist_guard), 0.7071, fs);
    y = lp.filter(lp.filter(y));
  }
  if (r.companding_mu > 0.0) {
    normalize(y, 0.1);
    for (Index i = 0; i < n; ++i)
      y(i) = mu_law_roundtrip(y(i), r.companding_mu, r.quantization_bits);
  }
  normalize(y, 0.1);
  return Waveform{y, cfg.sample_rate_hz};
}

std::vector<Trial> synthetic_protocol(const SynthConfig &cfg, Subset subset) {
  const SubsetCounts &c = cfg.for_subset(subset);
  std::vector<Trial> trials;
  const int total = c.bonafide + c.spoof;
  trials.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    char utt[32], spk[16], atk[16];
    std::snprintf(utt, sizeof(utt), "%s_%07d", subset_prefix(subset), i);
    std::snprintf(spk, sizeof(spk), "SPK%02d", i % cfg.num_speakers);
    Trial t;
    t.speaker_id = spk;
    t.utterance_id = utt;
    t.subset = subset;
    if (i < c.bonafide) {
      t.label = Label::kBonafide;
      t.attack_id = "-";
    } else {
      std::snprintf(atk, sizeof(atk), "A%02d", 1 + (i - c.bonafide) % cfg.num_attacks);
      t.label = Label::kSpoof;
      t.attack_id = atk;
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

std::filesystem::path protocol_path(const std::filesystem::path &corpus_dir, Subset subset) {
  return corpus_dir / "protocols" / (std::string(to_string(subset)) + ".txt");
}

std::filesystem::path wav_path(const std::filesystem::path &corpus_dir, Subset subset,
                               const std::string &utterance_id) {
  return corpus_dir / std::string(to_string(subset)) / (utterance_id + ".wav");
}

CorpusSummary generate_corpus(const SynthConfig &cfg, const std::filesystem::path &out_dir,
                              int workers) {
  cfg.validate();
  CorpusSummary summary;
  summary.counts = cfg.counts;
  const double cutoff = cfg.spoof.lowpass_hz > 0.0 ? cfg.spoof.lowpass_hz
                                                   : cfg.sample_rate_hz / 4.0;
  for (Subset subset : {Subset::kTrain, Subset::kDev, Subset::kEval}) {
    const std::vector<Trial> trials = synthetic_protocol(cfg, subset);
    std::vector<double> fractions(trials.size(), 0.0);
    parallel_for(trials.size(), workers, [&](std::size_t i) {
      const Trial &t = trials[i];
      const int speaker = static_cast<int>(i % static_cast<std::size_t>(cfg.num_speakers));
      const int attack = t.label == Label::kSpoof ? std::stoi(t.attack_id.substr(1)) - 1 : 0;
      const Waveform w = synthesize_utterance(cfg, subset, i, t.label, speaker, attack);
      write_wav(wav_path(out_dir, subset, t.utterance_id), w);
      if (subset == Subset::kTrain) fractions[i] = high_band_fraction(w, cutoff);
    });
    write_protocol(protocol_path(out_dir, subset), trials);
    if (subset == Subset::kTrain) {
      double bona = 0.0, spoof = 0.0;
      for (std::size_t i = 0; i < trials.size(); ++i)
        (trials[i].label == Label::kBonafide ? bona : spoof) += fractions[i];
      bona /= cfg.for_subset(subset).bonafide;
      spoof /= cfg.for_subset(subset).spoof;
      summary.band_energy_ratio_db = 10.0 * std::log10(bona / std::max(spoof, 1e-300));
      if (!(summary.band_energy_ratio_db > 3.0))
        fail(ErrorCode::kInvalidArgument,
             "synthetic classes differ by only " +
                 std::to_string(summary.band_energy_ratio_db) +
                 " dB above the spoof low-pass; recipes are not separable enough");
    }
  }
  return summary;
}

std::uint64_t directory_digest(const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  Fnv1a h;
  std::vector<char> buf(1 << 16);
  for (const auto &f : files) {
    h.update(std::filesystem::relative(f, dir).generic_string());
    std::ifstream is = io::open_input(f);
    while (is) {
      is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      h.update(buf.data(), static_cast<std::size_t>(is.gcount()));
    }
  }
  return h.value();
}

}  // namespace spoofcm
