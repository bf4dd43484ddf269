// tests/acceptance.cpp

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

// Acceptance suite. Prints one PASS/FAIL line per criterion; exits non-zero
// if any criterion fails. Usage: acceptance <scratch-dir>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "metric_oracles.hpp"
#include "spoofcm/cqcc.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/fusion.hpp"
#include "spoofcm/gmm.hpp"
#include "spoofcm/metrics.hpp"
#include "spoofcm/pipeline.hpp"
#include "spoofcm/xvector.hpp"
#include "xvector_fixtures.hpp"

namespace fs = std::filesystem;
using namespace spoofcm;

namespace {

// Tolerances and limits, one place.
constexpr int kGradSeeds = 24;
constexpr double kGradStep = 1e-5;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradDenomFloor = 1e-6;
constexpr double kGradSeconds = 10.0;
constexpr int kFocalDraws = 10000;
constexpr double kFocalTol = 1e-12;
constexpr int kEmDatasets = 100;
constexpr double kEmSlack = 1e-8;
constexpr double kRecoverySe = 3.0;
constexpr int kMetricSets = 200;
constexpr std::size_t kMetricMaxN = 2000;
constexpr double kMetricTol = 1e-12;
constexpr int kAntisymCases = 200;
constexpr int kPoolingCases = 1000;
constexpr double kPoolingPermTol = 1e-12;
constexpr double kPosteriorSumTol = 1e-9;
constexpr int kDlfsTables = 2000;
constexpr double kGmmEerMax = 5.0;       // percent
constexpr double kXvectorEerMax = 10.0;  // percent
constexpr double kFusedTdcfMax = 1.0;
constexpr double kExperimentSeconds = 600.0;
constexpr double kConstantQSpread = 0.15;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// 1 ---------------------------------------------------------------------
Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int seed = 1; seed <= kGradSeeds; ++seed) {
    const FocalLossParams focal{1.0, seed % 3 == 0 ? 0.0 : 2.0};
    worst = std::max(worst, test::gradient_check(static_cast<std::uint64_t>(seed), focal,
                                                 kGradStep, kGradDenomFloor));
  }
  const double secs = since(t0);
  return {worst < kGradRelTol && secs < kGradSeconds,
          fmt("max relative error %.3e over %d seeds (limit %.0e), %.2f s (limit %.0f s)", worst,
              kGradSeeds, kGradRelTol, secs, kGradSeconds)};
}

// 2 ---------------------------------------------------------------------
Outcome focal_reduction() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(kProbabilityClamp, 1.0 - kProbabilityClamp);
  double worst = 0.0;
  for (int i = 0; i < kFocalDraws; ++i) {
    const double p = u(rng);
    const int y = static_cast<int>(rng() % 2);
    const double bce = y == 1 ? -std::log(p) : -std::log(1.0 - p);
    worst = std::max(worst, std::abs(focal_loss(p, y, {1.0, 0.0}) - bce));
  }
  return {worst <= kFocalTol,
          fmt("max |focal - BCE| = %.3e over %d draws (limit %.0e)", worst, kFocalDraws, kFocalTol)};
}

// 3 ---------------------------------------------------------------------
Outcome em_monotonicity() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01(0.0, 1.0);
  double worst_drop = 0.0;
  std::size_t iterations = 0, collapses = 0;
  for (int set = 0; set < kEmDatasets; ++set) {
    const int K = 1 + static_cast<int>(rng() % 8);
    const int D = 1 + static_cast<int>(rng() % 10);
    const int true_k = 1 + static_cast<int>(rng() % 8);
    const int T = 10 * K + static_cast<int>(rng() % 500);
    MatrixXd centers(true_k, D);
    for (Index i = 0; i < centers.size(); ++i) centers.data()[i] = 3.0 * n01(rng);
    MatrixXd x(T, D);
    for (int t = 0; t < T; ++t) {
      const auto c = static_cast<Index>(rng() % static_cast<std::uint64_t>(true_k));
      for (int d = 0; d < D; ++d) x(t, d) = centers(c, d) + (0.3 + 0.1 * d) * n01(rng);
    }
    EmOptions opts;
    opts.seed = static_cast<std::uint64_t>(set);
    opts.tol = 0.0;  // run every iteration
    opts.max_iters = 30;
    const EmResult r = em_fit(x, K, opts);
    collapses += r.collapses.size();
    for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i) {
      worst_drop = std::max(worst_drop, r.log_likelihood_trace[i - 1] - r.log_likelihood_trace[i]);
      ++iterations;
    }
  }
  return {worst_drop <= kEmSlack,
          fmt("largest per-iteration decrease %.3e over %zu iterations of %d datasets (slack "
              "%.0e); %zu collapse reseeds",
              worst_drop, iterations, kEmDatasets, kEmSlack, collapses)};
}

// 4 ---------------------------------------------------------------------
Outcome gmm_recovery() {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01(0.0, 1.0);
  const VectorXd w = (VectorXd(3) << 0.5, 0.3, 0.2).finished();
  const MatrixXd mu = (MatrixXd(3, 2) << 0.0, 0.0, 6.0, 1.0, -2.0, 7.0).finished();
  const MatrixXd sd = (MatrixXd(3, 2) << 1.0, 0.7, 0.8, 1.2, 1.1, 0.9).finished();
  const int N = 6000;
  MatrixXd x(N, 2);
  std::discrete_distribution<int> pick({0.5, 0.3, 0.2});
  for (int t = 0; t < N; ++t) {
    const int k = pick(rng);
    for (int d = 0; d < 2; ++d) x(t, d) = mu(k, d) + sd(k, d) * n01(rng);
  }
  EmOptions opts;
  opts.max_iters = 200;
  opts.tol = 1e-9;
  const EmResult r = em_fit(x, 3, opts);
  std::array<int, 3> perm = {0, 1, 2};
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 2; ++d) {
        const double se = sd(k, d) / std::sqrt(N * w(k));
        worst = std::max(worst, std::abs(r.model.means()(perm[k], d) - mu(k, d)) / se);
      }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best <= kRecoverySe,
          fmt("worst fitted-mean error %.2f standard errors under the best matching (limit %.0f)",
              best, kRecoverySe)};
}

// 5 ---------------------------------------------------------------------
Outcome metric_oracles() {
  std::mt19937_64 rng(5);
  const TDcfParams p = default_tdcf_params();
  double worst_eer = 0.0, worst_tdcf = 0.0;
  for (int set = 0; set < kMetricSets; ++set) {
    const std::size_t n = 2 + rng() % (kMetricMaxN - 1);
    const LabeledScores s = test::random_scores(rng, n, set % 4 == 0);
    worst_eer = std::max(worst_eer, std::abs(eer(s) - test::brute_eer(s)));
    worst_tdcf = std::max(worst_tdcf, std::abs(min_tdcf(s, p) - test::brute_min_tdcf(s, p)));
  }
  LabeledScores flat;
  for (int i = 0; i < 40; ++i) {
    flat.ids.push_back("t" + std::to_string(i));
    flat.scores.push_back(0.25);
    flat.labels.push_back(i % 4 == 0 ? Label::kBonafide : Label::kSpoof);
  }
  LabeledScores sep = flat;
  for (int i = 0; i < 40; ++i) sep.scores[i] = sep.labels[i] == Label::kBonafide ? 1.0 + i : -1.0 - i;
  const double uninformative = min_tdcf(flat, p);
  const double separable = min_tdcf(sep, p);
  const bool ok = worst_eer <= kMetricTol && worst_tdcf <= kMetricTol && uninformative == 1.0 &&
                  separable == 0.0;
  return {ok, fmt("max |eer - sweep| %.2e, max |min_tdcf - sweep| %.2e over %d sets (limit %.0e); "
                  "uninformative %.17g, separable %.17g",
                  worst_eer, worst_tdcf, kMetricSets, kMetricTol, uninformative, separable)};
}

// 6 ---------------------------------------------------------------------
Outcome gmm_antisymmetry() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  const auto random_gmm = [&](int K, int D) {
    VectorXd w(K);
    MatrixXd m(K, D), v(K, D);
    for (int k = 0; k < K; ++k) w(k) = u(rng);
    w /= w.sum();
    for (Index i = 0; i < m.size(); ++i) {
      m.data()[i] = 2.0 * n01(rng);
      v.data()[i] = u(rng);
    }
    return DiagGmm(w, m, v, FeatureKind::kLFCC);
  };
  int violations = 0;
  for (int c = 0; c < kAntisymCases; ++c) {
    const int D = 1 + static_cast<int>(rng() % 12);
    const DiagGmm b = random_gmm(1 + static_cast<int>(rng() % 8), D);
    const DiagGmm s = random_gmm(1 + static_cast<int>(rng() % 8), D);
    FeatureMatrix f;
    f.kind = FeatureKind::kLFCC;
    f.values.resize(1 + static_cast<Index>(rng() % 300), D);
    for (Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = 3.0 * n01(rng);
    if (gmm_score(b, s, f, "t").score != -gmm_score(s, b, f, "t").score) ++violations;
  }
  return {violations == 0,
          fmt("%d of %d random cases violate exact antisymmetry", violations, kAntisymCases)};
}

// 7 ---------------------------------------------------------------------
Outcome pooling_invariances() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01(0.0, 1.0);
  double worst_perm = 0.0, worst_floor = 0.0;
  for (int c = 0; c < kPoolingCases; ++c) {
    const Index T = 1 + static_cast<Index>(rng() % 200), H = 1 + static_cast<Index>(rng() % 64);
    MatrixXd h(T, H);
    for (Index i = 0; i < h.size(); ++i) h.data()[i] = std::max(0.0, 2.0 * n01(rng));
    std::vector<Index> order(static_cast<std::size_t>(T));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    MatrixXd hp(T, H);
    for (Index t = 0; t < T; ++t) hp.row(t) = h.row(order[static_cast<std::size_t>(t)]);
    const VectorXd a = stats_pooling(h), b = stats_pooling(hp);
    worst_perm = std::max(worst_perm, (a - b).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff()));

    const RowVectorXd row = h.row(0);
    const MatrixXd constant = row.replicate(T, 1);
    const VectorXd pc = stats_pooling(constant);
    worst_floor = std::max(worst_floor, (pc.tail(H).array() - kPoolingStdFloor).abs().maxCoeff());
  }
  return {worst_perm <= kPoolingPermTol && worst_floor <= 1e-17,
          fmt("permutation: max relative change %.2e (limit %.0e); constant input: max |std - "
              "1e-5| %.2e over %d cases",
              worst_perm, kPoolingPermTol, worst_floor, kPoolingCases)};
}

// 9 ---------------------------------------------------------------------
Outcome dlfs_mechanics() {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> grid(-3, 3);
  std::normal_distribution<double> n01(0.0, 1.0);
  int bad_verbatim = 0, bad_identity = 0, bad_tiebreak = 0, bad_counts = 0;
  std::size_t ties_seen = 0;
  for (int table = 0; table < kDlfsTables; ++table) {
    const std::size_t S = 1 + rng() % 5, N = 1 + rng() % 40;
    const bool coarse = table % 2 == 0;  // integer grid: many ties
    std::vector<ScoreSet> sets(S);
    for (std::size_t s = 0; s < S; ++s) {
      sets[s].system = "S" + std::to_string(s);
      for (std::size_t t = 0; t < N; ++t)
        sets[s].scores.push_back({"T" + std::to_string(t),
                                  coarse ? static_cast<double>(grid(rng)) : n01(rng),
                                  sets[s].system});
    }
    const FusedScoreSet f = fuse_all(sets, std::nullopt);
    if (std::accumulate(f.selection_counts.begin(), f.selection_counts.end(), std::size_t{0}) != N)
      ++bad_counts;
    for (std::size_t t = 0; t < N; ++t) {
      const TrialScore &got = f.fused.scores[t];
      bool verbatim = false;
      std::size_t first_max = 0;
      int at_max = 0;
      double max_abs = -1.0;
      for (std::size_t s = 0; s < S; ++s) {
        const double v = sets[s].scores[t].score;
        if (got.system == sets[s].system && got.score == v) verbatim = true;
        if (std::abs(v) > max_abs) {
          max_abs = std::abs(v);
          first_max = s;
        }
      }
      for (std::size_t s = 0; s < S; ++s) at_max += std::abs(sets[s].scores[t].score) == max_abs;
      if (at_max > 1) ++ties_seen;
      if (!verbatim) ++bad_verbatim;
      if (got.system != sets[first_max].system || got.score != sets[first_max].scores[t].score)
        ++bad_tiebreak;
    }
    const std::vector<ScoreSet> twice = {sets[0], sets[0]};
    const FusedScoreSet self = fuse_all(twice, std::nullopt);
    for (std::size_t t = 0; t < N; ++t)
      if (self.fused.scores[t].score != sets[0].scores[t].score ||
          self.fused.scores[t].trial_id != sets[0].scores[t].trial_id)
        ++bad_identity;
  }
  return {bad_verbatim + bad_identity + bad_tiebreak + bad_counts == 0,
          fmt("%d tables: %d non-verbatim, %d self-fusion mismatches, %d tie-break errors (%zu "
              "ties exercised), %d count mismatches",
              kDlfsTables, bad_verbatim, bad_identity, bad_tiebreak, ties_seen, bad_counts)};
}

// 10/11 -----------------------------------------------------------------
struct Experiment {
  RunConfig cfg;
  std::vector<SystemMetrics> singles;
  SystemMetrics fused;
  std::size_t selection_total = 0;
  std::size_t trials = 0;
  std::vector<std::string> score_files;
  double seconds = 0.0;
};

const std::vector<std::string> kSingles = {"G-MFCC", "G-LFCC", "x-MFCC"};

Experiment run_experiment(const fs::path &root) {
  const auto t0 = Clock::now();
  Experiment e;
  RunConfig &cfg = e.cfg;
  cfg.corpus_dir = root / "corpus";
  cfg.work_dir = root / "work";
  cfg.seed = 42;
  cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  cfg.gmm_components = 32;
  cfg.fusion_systems = kSingles;
  cfg.fusion_name = "Prim-All";
  cfg.propagate_run_settings();
  fs::remove_all(root);

  run_synth_corpus(cfg);
  for (FeatureKind kind : {FeatureKind::kMFCC, FeatureKind::kLFCC})
    for (Subset s : {Subset::kTrain, Subset::kDev}) run_extract(cfg, kind, s);
  run_train_gmm(cfg, FeatureKind::kMFCC);
  run_train_gmm(cfg, FeatureKind::kLFCC);
  const TrainState<float> xv = run_train_xvector(cfg, FeatureKind::kMFCC);
  std::fprintf(stderr, "  x-MFCC: best epoch %d of %d, validation loss %.5f\n", xv.best_epoch + 1,
               xv.epoch, xv.validation_loss[static_cast<std::size_t>(xv.best_epoch)]);
  for (const auto &name : kSingles) {
    run_score(cfg, name, Subset::kDev);
    e.singles.push_back(run_evaluate(cfg, name, Subset::kDev).metrics);
    e.score_files.push_back(score_path(cfg, name, Subset::kDev).string());
  }
  const FusedScoreSet f = run_fuse(cfg, Subset::kDev);
  e.selection_total =
      std::accumulate(f.selection_counts.begin(), f.selection_counts.end(), std::size_t{0});
  e.fused = run_evaluate(cfg, cfg.fusion_name, Subset::kDev).metrics;
  e.trials = e.fused.trials;
  e.score_files.push_back(score_path(cfg, cfg.fusion_name, Subset::kDev).string());
  e.seconds = since(t0);
  for (const auto &m : e.singles)
    std::fprintf(stderr, "  %s: EER %.3f%%  min-t-DCF %.5f  Acc %.2f%%\n", m.system.c_str(),
                 m.eer_percent, m.min_tdcf, m.accuracy_percent);
  std::fprintf(stderr, "  %s: EER %.3f%%  min-t-DCF %.5f  Acc %.2f%%  selections:", e.fused.system.c_str(),
               e.fused.eer_percent, e.fused.min_tdcf, e.fused.accuracy_percent);
  for (std::size_t i = 0; i < f.systems.size(); ++i)
    std::fprintf(stderr, " %s=%zu", f.systems[i].c_str(), f.selection_counts[i]);
  std::fprintf(stderr, "\n  wall time %.1f s\n", e.seconds);
  return e;
}

Outcome end_to_end(const Experiment &e) {
  bool ok = true;
  std::string detail;
  for (const auto &m : e.singles) {
    const double limit = m.system[0] == 'G' ? kGmmEerMax : kXvectorEerMax;
    ok = ok && m.eer_percent < limit;
    detail += fmt("%s EER %.3f%% (< %.0f%%); ", m.system.c_str(), m.eer_percent, limit);
  }
  ok = ok && e.fused.min_tdcf <= kFusedTdcfMax && e.selection_total == e.trials &&
       e.seconds < kExperimentSeconds;
  detail += fmt("fused min-t-DCF %.5f (<= %.1f); selections %zu of %zu trials; %.1f s (< %.0f s)",
                e.fused.min_tdcf, kFusedTdcfMax, e.selection_total, e.trials, e.seconds,
                kExperimentSeconds);
  return {ok, detail};
}

std::string slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome determinism(const Experiment &a, const Experiment &b) {
  int differing = 0;
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < a.score_files.size(); ++i) {
    const std::string x = slurp(a.score_files[i]), y = slurp(b.score_files[i]);
    bytes += x.size();
    if (x.empty() || x != y) ++differing;
  }
  return {differing == 0 && a.score_files.size() == b.score_files.size(),
          fmt("%d of %zu score files differ (%zu bytes compared)", differing,
              a.score_files.size(), bytes)};
}

// 8 ---------------------------------------------------------------------
Outcome variable_length(const Experiment &e) {
  const XVectorModel<float> model = load_xvector(xvector_model_path(e.cfg, FeatureKind::kMFCC));
  SynthConfig long_cfg = e.cfg.synth;
  long_cfg.utterance_seconds = 10.05;
  const Waveform w = synthesize_utterance(long_cfg, Subset::kEval, 0, Label::kBonafide, 0, 0);
  const FeatureMatrix all = extract_feature(e.cfg, FeatureKind::kMFCC, w);
  double worst = 0.0;
  std::string detail;
  for (Index T : {9, 150, 1000}) {
    FeatureMatrix f = all;
    f.values = all.values.topRows(T);
    const Posteriors p = forward(model, f);
    worst = std::max(worst, std::abs(p.bonafide + p.spoof - 1.0));
    detail += fmt("T=%td p_b=%.6f; ", T, p.bonafide);
  }
  return {worst <= kPosteriorSumTol && all.num_frames() >= 1000,
          detail + fmt("max |p_b + p_s - 1| = %.2e (limit %.0e)", worst, kPosteriorSumTol)};
}

// 12 --------------------------------------------------------------------
Outcome constant_q() {
  const int fs_hz = 16000, B = 96;
  const double hop_ms = 10.0;
  std::vector<double> ratios;
  std::string detail;
  for (double fk : {60.0, 150.0, 400.0, 1000.0, 2500.0, 5000.0, 7000.0}) {
    // Single-bin spec at fk with the bins-per-octave Q.
    const CqtSpec spec = make_cqt_spec(fs_hz, fk, fk * std::exp2(0.5 / B), B);
    const int n = spec.window_lengths[0];
    const int len = n + 2000;
    const auto response = [&](double f) {
      Waveform w;
      w.sample_rate_hz = fs_hz;
      w.samples.resize(len);
      for (int i = 0; i < len; ++i)
        w.samples(i) = std::cos(2.0 * std::numbers::pi * f * i / fs_hz);
      const MatrixXd m = cqt(w, spec, hop_ms);
      return m(m.rows() / 2, 0);
    };
    const double step = 0.002;  // in bins
    std::vector<double> u, r;
    for (double x = -2.0; x <= 2.0 + 1e-12; x += step) {
      u.push_back(x);
      r.push_back(response(fk * std::exp2(x / B)));
    }
    const auto peak_it = std::max_element(r.begin(), r.end());
    const double half = *peak_it / std::sqrt(2.0);
    const std::size_t pk = static_cast<std::size_t>(peak_it - r.begin());
    std::size_t lo = pk, hi = pk;
    while (lo > 0 && r[lo] >= half) --lo;
    while (hi + 1 < r.size() && r[hi] >= half) ++hi;
    const auto cross = [&](std::size_t a, std::size_t b) {
      const double t = (half - r[a]) / (r[b] - r[a]);
      return fk * std::exp2((u[a] + t * (u[b] - u[a])) / B);
    };
    const double f_lo = cross(lo, lo + 1), f_hi = cross(hi - 1, hi);
    ratios.push_back((f_hi - f_lo) / fk);
    detail += fmt("%.0f Hz: %.5f; ", fk, ratios.back());
  }
  const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *mx / *mn - 1.0;
  return {spread <= kConstantQSpread,
          detail + fmt("spread %.2f%% (limit %.0f%%)", 100.0 * spread, 100.0 * kConstantQSpread)};
}

}  // namespace

int main(int argc, char **argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "spoofcm_acceptance";
  std::array<Outcome, 13> results;
  const auto guarded = [](const std::function<Outcome()> &f) {
    try {
      return f();
    } catch (const std::exception &e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };
  const std::array<const char *, 13> names = {"",
                                              "gradient oracle",
                                              "focal-loss reduction",
                                              "EM monotonicity",
                                              "GMM recovery",
                                              "metric oracles",
                                              "GMM score antisymmetry",
                                              "statistics-pooling invariances",
                                              "variable-length contract",
                                              "DLFS mechanics",
                                              "end-to-end synthetic experiment",
                                              "determinism",
                                              "constant-Q property"};
  const auto report = [&](int i) {
    std::printf("%s %2d %s: %s\n", results[i].pass ? "PASS" : "FAIL", i, names[i],
                results[i].detail.c_str());
    std::fflush(stdout);
  };

  results[1] = guarded(gradient_oracle);
  report(1);
  results[2] = guarded(focal_reduction);
  report(2);
  results[3] = guarded(em_monotonicity);
  report(3);
  results[4] = guarded(gmm_recovery);
  report(4);
  results[5] = guarded(metric_oracles);
  report(5);
  results[6] = guarded(gmm_antisymmetry);
  report(6);
  results[7] = guarded(pooling_invariances);
  report(7);

  std::fprintf(stderr, "running the synthetic experiment (first pass)\n");
  Experiment first, second;
  bool first_ok = false, second_ok = false;
  results[10] = guarded([&] {
    first = run_experiment(scratch / "run1");
    first_ok = true;
    return end_to_end(first);
  });
  results[8] = first_ok ? guarded([&] { return variable_length(first); })
                        : Outcome{false, "no trained model (experiment failed)"};
  report(8);
  results[9] = guarded(dlfs_mechanics);
  report(9);
  report(10);
  std::fprintf(stderr, "running the synthetic experiment (second pass)\n");
  results[11] = guarded([&] {
    second = run_experiment(scratch / "run2");
    second_ok = true;
    return first_ok ? determinism(first, second) : Outcome{false, "first pass failed"};
  });
  report(11);
  results[12] = guarded(constant_q);
  report(12);

  int failed = 0;
  for (int i = 1; i <= 12; ++i) failed += !results[i].pass;
  std::printf("%d of 12 acceptance criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
