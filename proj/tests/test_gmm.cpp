// tests/test_gmm.cpp

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "spoofcm/error.hpp"
#include "spoofcm/gmm.hpp"
#include "test_util.hpp"

using namespace spoofcm;

namespace {

DiagGmm random_gmm(std::mt19937_64 &rng, int K, int D) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  VectorXd w(K);
  MatrixXd var(K, D);
  for (int k = 0; k < K; ++k) w(k) = u(rng);
  for (int k = 0; k < K; ++k)
    for (int d = 0; d < D; ++d) var(k, d) = u(rng);
  w /= w.sum();
  return DiagGmm(w, test::random_matrix(rng, K, D, 2.0), var, FeatureKind::kMFCC);
}

// Straight density evaluation, one frame at a time.
double naive_frame_ll(const DiagGmm &g, const RowVectorXd &x) {
  double total = 0.0;
  for (Index k = 0; k < g.num_components(); ++k) {
    double log_pdf = std::log(g.weights()(k));
    for (Index d = 0; d < g.dim(); ++d) {
      const double v = g.variances()(k, d), diff = x(d) - g.means()(k, d);
      log_pdf += -0.5 * std::log(2.0 * std::numbers::pi * v) - 0.5 * diff * diff / v;
    }
    total += std::exp(log_pdf);
  }
  return std::log(total);
}

FeatureMatrix feats(MatrixXd v) {
  FeatureMatrix f;
  f.values = std::move(v);
  return f;
}

}  // namespace

TEST_CASE("model constructor validates its invariants") {
  const MatrixXd mu = MatrixXd::Zero(2, 3), var = MatrixXd::Ones(2, 3);
  CHECK_NOTHROW(DiagGmm(VectorXd::Constant(2, 0.5), mu, var, FeatureKind::kMFCC));
  CHECK_THROWS_AS(DiagGmm(VectorXd::Constant(2, 0.6), mu, var, FeatureKind::kMFCC), Error);
  MatrixXd bad = var;
  bad(1, 2) = 0.0;
  CHECK_THROWS_AS(DiagGmm(VectorXd::Constant(2, 0.5), mu, bad, FeatureKind::kMFCC), Error);
  CHECK_THROWS_AS(DiagGmm(VectorXd::Constant(2, 0.5), MatrixXd::Zero(2, 4), var,
                          FeatureKind::kMFCC),
                  Error);
}

TEST_CASE("log-likelihoods match direct density evaluation") {
  std::mt19937_64 rng(10);
  const DiagGmm g = random_gmm(rng, 5, 4);
  const MatrixXd x = test::random_matrix(rng, 40, 4, 2.0);
  const VectorXd ll = g.frame_log_likelihoods(x);
  for (Index t = 0; t < x.rows(); ++t)
    CHECK(ll(t) == doctest::Approx(naive_frame_ll(g, x.row(t))).epsilon(1e-10));
  const MatrixXd post = g.posteriors(x);
  CHECK((post.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);

  const DiagGmm std_normal(VectorXd::Ones(1), MatrixXd::Zero(1, 1), MatrixXd::Ones(1, 1),
                           FeatureKind::kMFCC);
  CHECK(avg_log_likelihood(std_normal, feats(MatrixXd::Zero(1, 1))) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(avg_log_likelihood(std_normal, feats(MatrixXd::Zero(1, 1))) ==
        doctest::Approx(-0.91894).epsilon(1e-5));
}

TEST_CASE("average log-likelihood is an average over frames") {
  std::mt19937_64 rng(13);
  const DiagGmm g = random_gmm(rng, 3, 2);
  const MatrixXd x = test::random_matrix(rng, 25, 2);
  const double base = avg_log_likelihood(g, feats(x));
  MatrixXd doubled(50, 2);
  doubled << x, x;
  CHECK(avg_log_likelihood(g, feats(doubled)) == doctest::Approx(base).epsilon(1e-13));
  std::vector<Index> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  MatrixXd shuffled(25, 2);
  for (Index i = 0; i < 25; ++i) shuffled.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  CHECK(avg_log_likelihood(g, feats(shuffled)) == doctest::Approx(base).epsilon(1e-13));
  CHECK_THROWS_AS(avg_log_likelihood(g, feats(MatrixXd(0, 2))), Error);
  CHECK_THROWS_AS(avg_log_likelihood(g, feats(MatrixXd::Zero(3, 5))), Error);
  FeatureMatrix wrong = feats(x);
  wrong.kind = FeatureKind::kLFCC;
  CHECK_THROWS_AS(avg_log_likelihood(g, wrong), Error);
}

TEST_CASE("k-means initialisation") {
  std::mt19937_64 rng(14);
  const MatrixXd x = test::random_matrix(rng, 200, 3, 1.5);
  const VectorXd floor = variance_floor(x, 1e-5, 1e-3);
  const DiagGmm one = kmeans_init(x, 1, 7, floor);
  const RowVectorXd mean = x.colwise().mean();
  CHECK((one.means().row(0) - mean).cwiseAbs().maxCoeff() < 1e-12);
  const RowVectorXd var = (x.rowwise() - mean).cwiseAbs2().colwise().mean();
  CHECK((one.variances().row(0) - var).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(one.weights()(0) == 1.0);

  MatrixXd pts(4, 2);
  pts << 0, 0, 5, 5, -4, 6, 9, -3;
  MatrixXd rep(40, 2);
  for (int i = 0; i < 40; ++i) rep.row(i) = pts.row(i % 4);
  const DiagGmm four = kmeans_init(rep, 4, 3, variance_floor(rep, 1e-5, 1e-3));
  CHECK(quantization_distortion(rep, four.means()) == 0.0);

  const DiagGmm a = kmeans_init(x, 6, 99, floor), b = kmeans_init(x, 6, 99, floor);
  CHECK(a.means() == b.means());
  CHECK(a.variances() == b.variances());
  CHECK(a.weights() == b.weights());
  CHECK_THROWS_AS(kmeans_init(x.topRows(3), 4, 1, floor), Error);
}

TEST_CASE("EM with one component gives the closed-form ML estimate") {
  std::mt19937_64 rng(15);
  MatrixXd x = test::random_matrix(rng, 500, 4, 1.7);
  x.rowwise() += RowVectorXd::LinSpaced(4, -3.0, 3.0);
  EmOptions opts;
  const EmResult r = em_fit(x, 1, opts);
  const RowVectorXd mean = x.colwise().mean();
  const RowVectorXd var = (x.rowwise() - mean).cwiseAbs2().colwise().mean();
  CHECK((r.model.means().row(0) - mean).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((r.model.variances().row(0) - var).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("EM trace, floor and worker independence") {
  std::mt19937_64 rng(16);
  MatrixXd x(600, 3);
  x.topRows(300) = test::random_matrix(rng, 300, 3);
  x.bottomRows(300).rowwise() = RowVectorXd::Constant(3, 8.0);  // duplicated point
  EmOptions opts;
  opts.block_frames = 64;
  const EmResult r = em_fit(x, 4, opts);
  CHECK(r.model.variances().minCoeff() >= 1e-5);
  for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i)
    CHECK(r.log_likelihood_trace[i] >= r.log_likelihood_trace[i - 1] - 1e-8);
  CHECK(static_cast<int>(r.log_likelihood_trace.size()) <= opts.max_iters + 1);

  opts.workers = 3;
  const EmResult p = em_fit(x, 4, opts);
  CHECK(p.model.means() == r.model.means());
  CHECK(p.model.variances() == r.model.variances());
  CHECK(p.model.weights() == r.model.weights());
  CHECK(p.log_likelihood_trace == r.log_likelihood_trace);
  CHECK_THROWS_AS(em_fit(x.topRows(30), 4, opts), Error);
}

TEST_CASE("GMM trial score") {
  std::mt19937_64 rng(17);
  const DiagGmm b(VectorXd::Constant(2, 0.5),
                  (MatrixXd(2, 2) << 3, 3, 4, 2).finished(), MatrixXd::Ones(2, 2),
                  FeatureKind::kMFCC);
  const DiagGmm s(VectorXd::Constant(2, 0.5),
                  (MatrixXd(2, 2) << -3, -3, -2, -4).finished(), MatrixXd::Ones(2, 2),
                  FeatureKind::kMFCC);
  const FeatureMatrix f = feats(test::random_matrix(rng, 30, 2));
  CHECK(gmm_score(b, b, f, "u").score == 0.0);
  CHECK(gmm_score(b, s, f, "u").score == -gmm_score(s, b, f, "u").score);
  CHECK(gmm_score(b, s, f, "u").score ==
        avg_log_likelihood(b, f) - avg_log_likelihood(s, f));
  CHECK(gmm_score(b, s, f, "u7", "G-MFCC").trial_id == "u7");

  // Utterances sampled from b score positive.
  std::normal_distribution<double> n01(0.0, 1.0);
  std::bernoulli_distribution pick(0.5);
  int positive = 0;
  for (int u = 0; u < 500; ++u) {
    MatrixXd x(20, 2);
    for (Index t = 0; t < 20; ++t) {
      const int k = pick(rng) ? 1 : 0;
      for (Index d = 0; d < 2; ++d) x(t, d) = b.means()(k, d) + n01(rng);
    }
    positive += gmm_score(b, s, feats(x), "u").score > 0.0;
  }
  CHECK(positive >= 495);
  CHECK_THROWS_AS(gmm_score(b, s, feats(MatrixXd(0, 2)), "u"), Error);
}

TEST_CASE("model file round trip") {
  std::mt19937_64 rng(18);
  const DiagGmm g = random_gmm(rng, 6, 5);
  const auto dir = test::temp_dir("gmm_io");
  save_gmm(dir / "m.gmm", g);
  const DiagGmm r = load_gmm(dir / "m.gmm");
  CHECK(r.weights() == g.weights());
  CHECK(r.means() == g.means());
  CHECK(r.variances() == g.variances());
  CHECK(r.kind() == g.kind());
  std::ofstream(dir / "bad.gmm") << "SPXX";
  CHECK_THROWS_AS(load_gmm(dir / "bad.gmm"), Error);
}
