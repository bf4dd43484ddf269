// include/spoofcm/metrics.hpp

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

#ifndef SPOOFCM_METRICS_HPP_
#define SPOOFCM_METRICS_HPP_

#include <string>
#include <vector>

#include "spoofcm/protocol.hpp"

namespace spoofcm {

/// Countermeasure error rates at one threshold. A trial is accepted as
/// bonafide when score >= threshold.
struct DetPoint {
  double threshold;
  double p_miss;  // bonafide rejected
  double p_fa;    // spoof accepted
};

/// One point per unique score plus -inf / +inf sentinels, in increasing
/// threshold order. Throws kSingleClassScores unless both labels occur.
std::vector<DetPoint> det_curve(const LabeledScores &s);

/// Equal error rate by linear interpolation between the two DET points where
/// p_miss - p_fa changes sign. Value in [0, 1].
double eer_from_det(const std::vector<DetPoint> &det);
double eer(const LabeledScores &s);

/// Percentage of trials where (score >= threshold) agrees with the label.
double accuracy(const LabeledScores &s, double threshold);

/// Tandem detection cost parameters. The ASV operating point is fixed: miss
/// and false-alarm rates on target / non-target trials and the miss rate on
/// spoofed trials at the ASV threshold.
struct TDcfParams {
  double pi_target = 0.9405;
  double pi_nontarget = 0.0095;
  double pi_spoof = 0.05;
  double c_miss_asv = 1.0;
  double c_fa_asv = 10.0;
  double c_miss_cm = 1.0;
  double c_fa_cm = 10.0;
  double p_miss_asv = 0.0;
  double p_fa_asv = 0.0;
  double p_miss_spoof_asv = 0.0;

  /// Priors non-negative summing to 1 +- 1e-9, costs > 0, rates in [0, 1].
  void validate() const;
};

struct AsvOperatingPoint {
  double p_miss;
  double p_fa;
  double p_miss_spoof;
};

/// Stand-in ASV system with unit-variance Gaussian scores: targets at
/// +target_mean, non-targets at -target_mean, spoofs at spoof_mean, and the
/// threshold at 0 (its EER point). Rates are evaluated in closed form.
AsvOperatingPoint synthetic_asv_operating_point(double target_mean = 2.5,
                                                double spoof_mean = 0.5);

/// Challenge-style priors and costs with the synthetic ASV operating point.
TDcfParams default_tdcf_params();

struct TDcfCoefficients {
  double c1;
  double c2;
};

/// C1 = pi_tar (C_miss_cm - C_miss_asv P_miss_asv) - pi_non C_fa_asv P_fa_asv
/// C2 = C_fa_cm pi_spoof (1 - P_miss_spoof_asv)
/// Throws kDegenerateOperatingPoint when either is <= 0.
TDcfCoefficients tdcf_coefficients(const TDcfParams &p);

/// min over thresholds of (C1 P_miss_cm + C2 P_fa_cm) / min(C1, C2).
double min_tdcf(const LabeledScores &s, const TDcfParams &p);
double min_tdcf_from_det(const std::vector<DetPoint> &det, const TDcfCoefficients &c);

struct SystemMetrics {
  std::string system;
  double eer_percent = 0.0;
  double min_tdcf = 0.0;
  double accuracy_percent = 0.0;
  std::size_t trials = 0;
};

SystemMetrics evaluate_scores(const std::string &system, const LabeledScores &s,
                              const TDcfParams &p, double threshold = 0.0);

}  // namespace spoofcm

#endif  // SPOOFCM_METRICS_HPP_
