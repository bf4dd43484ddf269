// include/spoofcm/gmm.hpp

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

#ifndef SPOOFCM_GMM_HPP_
#define SPOOFCM_GMM_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spoofcm/scores.hpp"
#include "spoofcm/spectral.hpp"
#include "spoofcm/types.hpp"

namespace spoofcm {

/// Diagonal-covariance Gaussian mixture for one class. Immutable once
/// constructed; the constructor enforces sum(w) = 1 +- 1e-9, w > 0 and
/// strictly positive variances.
class DiagGmm {
 public:
  DiagGmm(VectorXd weights, MatrixXd means, MatrixXd variances, FeatureKind kind);

  Index num_components() const { return weights_.size(); }
  Index dim() const { return means_.cols(); }
  FeatureKind kind() const { return kind_; }
  const VectorXd &weights() const { return weights_; }
  const MatrixXd &means() const { return means_; }          // K x D
  const MatrixXd &variances() const { return variances_; }  // K x D

  /// T x K matrix of ln(w_k N(x_t; mu_k, sigma_k^2)).
  MatrixXd component_log_likelihoods(const Eigen::Ref<const MatrixXd> &x) const;

  /// Per-frame ln sum_k w_k N(x_t; ...), via log-sum-exp.
  VectorXd frame_log_likelihoods(const Eigen::Ref<const MatrixXd> &x) const;

  /// T x K posterior responsibilities; rows sum to one.
  MatrixXd posteriors(const Eigen::Ref<const MatrixXd> &x) const;

 private:
  VectorXd weights_;
  MatrixXd means_;
  MatrixXd variances_;
  FeatureKind kind_;
  // Cached: ln w_k - 0.5 sum_d ln(2 pi sigma^2), 1/sigma^2, mu/sigma^2 and
  // sum_d mu^2/sigma^2.
  VectorXd log_norm_;
  MatrixXd inv_var_;
  MatrixXd mean_inv_var_;
  VectorXd mean_sq_inv_var_;
};

/// Per-dimension variance floor: max(abs_floor, rel_floor * global variance).
VectorXd variance_floor(const Eigen::Ref<const MatrixXd> &x, double abs_floor,
                        double rel_floor);

/// k-means++ seeding followed by at most 20 Lloyd iterations. Weights are
/// cluster proportions and variances the per-cluster diagonal variances,
/// clamped to `floor`. Deterministic for a given seed.
DiagGmm kmeans_init(const Eigen::Ref<const MatrixXd> &x, int num_components,
                    std::uint64_t seed, const VectorXd &floor,
                    FeatureKind kind = FeatureKind::kMFCC);

/// Sum over frames of the squared distance to the nearest mean.
double quantization_distortion(const Eigen::Ref<const MatrixXd> &x,
                               const MatrixXd &means);

struct EmOptions {
  int max_iters = 50;
  double tol = 1e-4;
  double abs_var_floor = 1e-5;
  double rel_var_floor = 1e-3;
  std::uint64_t seed = 42;
  int workers = 1;
  /// Frames per E-step block. Sufficient statistics are reduced block by
  /// block in a fixed order, so results do not depend on `workers`.
  Index block_frames = 4096;
};

struct CollapseEvent {
  int iteration;
  Index component;
};

struct EmResult {
  DiagGmm model;
  /// Average log-likelihood of the training frames, one entry per evaluated
  /// model; the last entry belongs to the returned model.
  std::vector<double> log_likelihood_trace;
  std::vector<CollapseEvent> collapses;
};

/// Fits a K-component diagonal GMM by EM from a k-means initialisation.
/// Requires at least 10*K frames. A component whose responsibility mass
/// underflows is reseeded on the worst-explained frame and the event logged.
EmResult em_fit(const Eigen::Ref<const MatrixXd> &x, int num_components,
                const EmOptions &options, FeatureKind kind = FeatureKind::kMFCC);

/// (1/T) sum_t ln p(x_t | model).
double avg_log_likelihood(const DiagGmm &model, const FeatureMatrix &features);

/// Per-frame average log-likelihood ratio of bonafide against spoof model.
double gmm_llr(const DiagGmm &bonafide, const DiagGmm &spoof,
               const FeatureMatrix &features);

/// gmm_llr packaged with the trial id and system tag.
TrialScore gmm_score(const DiagGmm &bonafide, const DiagGmm &spoof,
                     const FeatureMatrix &features, const std::string &trial_id,
                     const std::string &system = {});

// Model file: "SPGM" | u16 version | kind string | u32 K | u32 D |
//   weights, means (row-major), variances (row-major) as f64.
inline constexpr std::uint16_t kGmmFormatVersion = 1;

void save_gmm(const std::filesystem::path &path, const DiagGmm &model);
DiagGmm load_gmm(const std::filesystem::path &path);

}  // namespace spoofcm

#endif  // SPOOFCM_GMM_HPP_
