// include/spoofcm/synth.hpp

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

#ifndef SPOOFCM_SYNTH_HPP_
#define SPOOFCM_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "spoofcm/audio.hpp"
#include "spoofcm/protocol.hpp"

namespace spoofcm {

/// One class's DSP chain: coloured noise through two resonators, slow
/// amplitude modulation, then an optional low-pass and mu-law companding
/// stage standing in for a replay channel.
struct ClassRecipe {
  double formant1_hz = 500.0;
  double formant2_hz = 1500.0;
  double resonator_q = 5.0;
  double direct_gain = 0.5;
  double modulation_hz = 4.0;
  double modulation_depth = 0.5;
  double lowpass_hz = 0.0;  // 0 disables
  double companding_mu = 0.0;  // 0 disables
  int quantization_bits = 8;
};

struct SubsetCounts {
  int bonafide = 0;
  int spoof = 0;
};

struct SynthConfig {
  // Table-1 LA proportions scaled by 1/20; eval mirrors dev.
  std::array<SubsetCounts, 3> counts = {{{129, 1140}, {127, 1115}, {127, 1115}}};
  int sample_rate_hz = 16000;
  double utterance_seconds = 2.0;
  std::uint64_t seed = 42;
  int num_speakers = 20;
  int num_attacks = 6;
  ClassRecipe bonafide{};
  ClassRecipe spoof{650.0, 1800.0, 5.0, 0.5, 4.0, 0.5, 3400.0, 255.0, 8};

  const SubsetCounts &for_subset(Subset s) const {
    return counts[static_cast<std::size_t>(s)];
  }
  void validate() const;
};

/// Deterministic in (cfg.seed, subset, index); independent of any other
/// utterance, so generation order and parallelism do not change the output.
Waveform synthesize_utterance(const SynthConfig &cfg, Subset subset, std::size_t index,
                              Label label, int speaker, int attack);

/// Protocol of one subset: bonafide trials first, then spoofs.
std::vector<Trial> synthetic_protocol(const SynthConfig &cfg, Subset subset);

struct CorpusSummary {
  std::array<SubsetCounts, 3> counts{};
  /// Bonafide / spoof ratio of the energy fraction above the spoof
  /// low-pass cutoff (train subset), in dB.
  double band_energy_ratio_db = 0.0;
};

/// Writes <out>/{train,dev,eval}/<utt>.wav and <out>/protocols/<subset>.txt.
/// Throws kInvalidArgument if the classes' long-term spectra differ by less
/// than 3 dB in the distortion band.
CorpusSummary generate_corpus(const SynthConfig &cfg, const std::filesystem::path &out_dir,
                              int workers = 1);

std::filesystem::path protocol_path(const std::filesystem::path &corpus_dir, Subset subset);
std::filesystem::path wav_path(const std::filesystem::path &corpus_dir, Subset subset,
                               const std::string &utterance_id);

/// FNV-1a over relative paths and contents of every regular file, in
/// sorted path order.
std::uint64_t directory_digest(const std::filesystem::path &dir);

}  // namespace spoofcm

#endif  // SPOOFCM_SYNTH_HPP_
