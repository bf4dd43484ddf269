// tests/test_metrics.cpp

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

#include "metric_oracles.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/metrics.hpp"

using namespace spoofcm;

namespace {

LabeledScores make(std::vector<double> bona, std::vector<double> spoof) {
  LabeledScores s;
  for (double b : bona) {
    s.scores.push_back(b);
    s.labels.push_back(Label::kBonafide);
    s.ids.push_back("b" + std::to_string(s.ids.size()));
  }
  for (double v : spoof) {
    s.scores.push_back(v);
    s.labels.push_back(Label::kSpoof);
    s.ids.push_back("s" + std::to_string(s.ids.size()));
  }
  return s;
}

LabeledScores flipped(LabeledScores s) {
  for (auto &l : s.labels) l = l == Label::kBonafide ? Label::kSpoof : Label::kBonafide;
  return s;
}

}  // namespace

TEST_CASE("DET curve shape") {
  const auto det = det_curve(make({2, 3}, {0, 1}));
  CHECK(std::isinf(det.front().threshold));
  CHECK(det.front().threshold < 0);
  CHECK(det.front().p_miss == 0.0);
  CHECK(det.front().p_fa == 1.0);
  CHECK(std::isinf(det.back().threshold));
  CHECK(det.back().p_miss == 1.0);
  CHECK(det.back().p_fa == 0.0);
  CHECK(std::any_of(det.begin(), det.end(),
                    [](const DetPoint &p) { return p.p_miss == 0.0 && p.p_fa == 0.0; }));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const LabeledScores s = test::random_scores(rng, 2 + rng() % 60, trial % 2 == 0);
    const auto d = det_curve(s);
    for (std::size_t i = 1; i < d.size(); ++i) {
      CHECK(d[i].threshold > d[i - 1].threshold);
      CHECK(d[i].p_miss >= d[i - 1].p_miss);
      CHECK(d[i].p_fa <= d[i - 1].p_fa);
    }
    for (std::size_t i = 0; i < d.size(); i += 7) {
      const test::Rates r = test::count_rates(s, d[i].threshold);
      CHECK(r.p_miss == d[i].p_miss);
      CHECK(r.p_fa == d[i].p_fa);
    }
  }
  CHECK_THROWS_AS(det_curve(make({1, 2}, {})), Error);
}

TEST_CASE("EER") {
  CHECK(eer(make({2, 3}, {0, 1})) == 0.0);
  CHECK(eer(make({0, 1}, {2, 3})) == 1.0);
  CHECK(eer(make({0, 2}, {1, 3})) == 0.5);
  CHECK(test::brute_eer(make({0, 2}, {1, 3})) == 0.5);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const LabeledScores s = test::random_scores(rng, 2 + rng() % 400, trial % 3 == 0);
    CHECK(std::abs(eer(s) - test::brute_eer(s)) <= 1e-12);
    LabeledScores warped = s;
    for (double &v : warped.scores) v = std::exp(v) * 3.0 + 1.0;
    CHECK(eer(warped) == eer(s));
  }
}

TEST_CASE("accuracy") {
  const LabeledScores s = make({2, 3, 5}, {0, 1});
  CHECK(accuracy(s, 1.5) == 100.0);
  CHECK(accuracy(s, -std::numeric_limits<double>::infinity()) == doctest::Approx(60.0));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const LabeledScores r = test::random_scores(rng, 50, false);
    CHECK(accuracy(flipped(r), 0.3) == doctest::Approx(100.0 - accuracy(r, 0.3)).epsilon(1e-12));
  }
  CHECK(accuracy(make({1.0}, {1.0}), 1.0) == 50.0);
}

TEST_CASE("t-DCF coefficients") {
  TDcfParams p = default_tdcf_params();
  p.p_miss_asv = p.p_fa_asv = p.p_miss_spoof_asv = 0.0;
  const TDcfCoefficients perfect = tdcf_coefficients(p);
  CHECK(perfect.c1 == doctest::Approx(0.9405 * 1.0).epsilon(1e-15));
  CHECK(perfect.c2 == doctest::Approx(10.0 * 0.05).epsilon(1e-15));

  p.p_miss_spoof_asv = 1.0;
  try {
    tdcf_coefficients(p);
    FAIL("expected DegenerateOperatingPoint");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kDegenerateOperatingPoint);
  }

  // Gaussian stand-in ASV, evaluated here with the normal CDF directly.
  const auto Phi = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
  const AsvOperatingPoint op = synthetic_asv_operating_point(2.5, 0.5);
  CHECK(op.p_miss == doctest::Approx(Phi(-2.5)).epsilon(1e-14));
  CHECK(op.p_fa == doctest::Approx(1.0 - Phi(2.5)).epsilon(1e-12));
  CHECK(op.p_miss_spoof == doctest::Approx(Phi(-0.5)).epsilon(1e-14));

  const TDcfParams d = default_tdcf_params();
  CHECK(d.pi_target == 0.9405);
  CHECK(d.pi_nontarget == 0.0095);
  CHECK(d.pi_spoof == 0.05);
  const TDcfCoefficients c = tdcf_coefficients(d);
  const double c1 = 0.9405 * (1.0 - 1.0 * Phi(-2.5)) - 0.0095 * 10.0 * (1.0 - Phi(2.5));
  const double c2 = 10.0 * 0.05 * (1.0 - Phi(-0.5));
  CHECK(c.c1 == doctest::Approx(c1).epsilon(1e-12));
  CHECK(c.c2 == doctest::Approx(c2).epsilon(1e-12));

  TDcfParams bad = d;
  bad.pi_spoof = 0.2;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("min t-DCF") {
  const TDcfParams p = default_tdcf_params();
  CHECK(min_tdcf(make({2, 3}, {0, 1}), p) == 0.0);
  CHECK(min_tdcf(make({1, 1, 1}, {1, 1, 1, 1}), p) == 1.0);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const LabeledScores s = test::random_scores(rng, 2 + rng() % 400, trial % 3 == 1);
    const double m = min_tdcf(s, p);
    CHECK(std::abs(m - test::brute_min_tdcf(s, p)) <= 1e-12);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
    LabeledScores warped = s;
    for (double &v : warped.scores) v = v * v * v - 7.0;
    CHECK(min_tdcf(warped, p) == m);
  }
}

TEST_CASE("evaluate_scores bundles the three metrics") {
  const LabeledScores s = make({2, 3, -1}, {0, 1, -2, -3});
  const SystemMetrics m = evaluate_scores("G-LFCC", s, default_tdcf_params(), 0.0);
  CHECK(m.system == "G-LFCC");
  CHECK(m.trials == 7);
  CHECK(m.eer_percent == doctest::Approx(100.0 * eer(s)));
  CHECK(m.min_tdcf == min_tdcf(s, default_tdcf_params()));
  CHECK(m.accuracy_percent == doctest::Approx(100.0 * 4.0 / 7.0));
}
