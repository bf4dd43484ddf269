// src/metrics.cpp

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

#include "spoofcm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spoofcm/error.hpp"

namespace spoofcm {

std::vector<DetPoint> det_curve(const LabeledScores &s) {
  std::size_t n_bona = 0;
  for (Label l : s.labels) n_bona += l == Label::kBonafide;
  const std::size_t n_spoof = s.size() - n_bona;
  if (n_bona == 0 || n_spoof == 0)
    fail(ErrorCode::kSingleClassScores, "scores need both bonafide and spoof trials");

  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s.scores[a] < s.scores[b]; });

  const double nb = static_cast<double>(n_bona), ns = static_cast<double>(n_spoof);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<DetPoint> det;
  det.reserve(s.size() + 2);
  det.push_back({-inf, 0.0, 1.0});
  std::size_t bona_below = 0, spoof_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double theta = s.scores[order[i]];
    det.push_back({theta, static_cast<double>(bona_below) / nb,
                   static_cast<double>(n_spoof - spoof_below) / ns});
    for (; i < order.size() && s.scores[order[i]] == theta; ++i) {
      if (s.labels[order[i]] == Label::kBonafide)
        ++bona_below;
      else
        ++spoof_below;
    }
  }
  det.push_back({inf, 1.0, 0.0});
  return det;
}

double eer_from_det(const std::vector<DetPoint> &det) {
  for (std::size_t j = 1; j < det.size(); ++j) {
    const double d1 = det[j].p_miss - det[j].p_fa;
    if (d1 < 0.0) continue;
    const double d0 = det[j - 1].p_miss - det[j - 1].p_fa;
    if (d1 == 0.0) return det[j].p_miss;
    const double lambda = -d0 / (d1 - d0);
    return det[j - 1].p_miss + lambda * (det[j].p_miss - det[j - 1].p_miss);
  }
  return det.back().p_miss;
}

double eer(const LabeledScores &s) { return eer_from_det(det_curve(s)); }

double accuracy(const LabeledScores &s, double threshold) {
  if (s.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    correct += (s.scores[i] >= threshold) == (s.labels[i] == Label::kBonafide);
  return 100.0 * static_cast<double>(correct) / static_cast<double>(s.size());
}

void TDcfParams::validate() const {
  for (double p : {pi_target, pi_nontarget, pi_spoof})
    if (!(p >= 0.0)) fail(ErrorCode::kInvalidArgument, "t-DCF priors must be non-negative");
  if (std::abs(pi_target + pi_nontarget + pi_spoof - 1.0) > 1e-9)
    fail(ErrorCode::kInvalidArgument, "t-DCF priors must sum to 1");
  for (double c : {c_miss_asv, c_fa_asv, c_miss_cm, c_fa_cm})
    if (!(c > 0.0)) fail(ErrorCode::kInvalidArgument, "t-DCF costs must be positive");
  for (double r : {p_miss_asv, p_fa_asv, p_miss_spoof_asv})
    if (!(r >= 0.0 && r <= 1.0))
      fail(ErrorCode::kInvalidArgument, "ASV error rates must lie in [0, 1]");
}

AsvOperatingPoint synthetic_asv_operating_point(double target_mean, double spoof_mean) {
  // P(N(mu, 1) < 0) = erfc(mu / sqrt 2) / 2
  const auto below_zero = [](double mu) { return 0.5 * std::erfc(mu / std::sqrt(2.0)); };
  return {below_zero(target_mean), below_zero(target_mean), below_zero(spoof_mean)};
}

TDcfParams default_tdcf_params() {
  TDcfParams p;
  const AsvOperatingPoint asv = synthetic_asv_operating_point();
  p.p_miss_asv = asv.p_miss;
  p.p_fa_asv = asv.p_fa;
  p.p_miss_spoof_asv = asv.p_miss_spoof;
  return p;
}

TDcfCoefficients tdcf_coefficients(const TDcfParams &p) {
  p.validate();
  TDcfCoefficients c;
  c.c1 = p.pi_target * (p.c_miss_cm - p.c_miss_asv * p.p_miss_asv) -
         p.pi_nontarget * p.c_fa_asv * p.p_fa_asv;
  c.c2 = p.c_fa_cm * p.pi_spoof * (1.0 - p.p_miss_spoof_asv);
  if (!(c.c1 > 0.0) || !(c.c2 > 0.0))
    fail(ErrorCode::kDegenerateOperatingPoint,
         "t-DCF coefficients must be positive (C1=" + std::to_string(c.c1) +
             ", C2=" + std::to_string(c.c2) + ")");
  return c;
}

double min_tdcf_from_det(const std::vector<DetPoint> &det, const TDcfCoefficients &c) {
  const double norm = std::min(c.c1, c.c2);
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint &pt : det)
    best = std::min(best, (c.c1 * pt.p_miss + c.c2 * pt.p_fa) / norm);
  return best;
}

double min_tdcf(const LabeledScores &s, const TDcfParams &p) {
  const TDcfCoefficients c = tdcf_coefficients(p);
  return min_tdcf_from_det(det_curve(s), c);
}

SystemMetrics evaluate_scores(const std::string &system, const LabeledScores &s,
                              const TDcfParams &p, double threshold) {
  const TDcfCoefficients c = tdcf_coefficients(p);
  const std::vector<DetPoint> det = det_curve(s);
  SystemMetrics m;
  m.system = system;
  m.eer_percent = 100.0 * eer_from_det(det);
  m.min_tdcf = min_tdcf_from_det(det, c);
  m.accuracy_percent = accuracy(s, threshold);
  m.trials = s.size();
  return m;
}

}  // namespace spoofcm
