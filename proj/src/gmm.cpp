// src/gmm.cpp

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

#include "spoofcm/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "spoofcm/binary_io.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/parallel.hpp"

namespace spoofcm {

namespace {

// Responsibility mass below which a component is considered collapsed.
constexpr double kCollapseMass = 1e-8;

VectorXd row_log_sum_exp(const MatrixXd &l) {
  const VectorXd m = l.rowwise().maxCoeff();
  return m + ((l.colwise() - m).array().exp().rowwise().sum().log()).matrix();
}

MatrixXd squared_distances(const Eigen::Ref<const MatrixXd> &x, const MatrixXd &c) {
  const VectorXd xx = x.rowwise().squaredNorm();
  const RowVectorX<double> cc = c.rowwise().squaredNorm().transpose();
  MatrixXd d = -2.0 * x * c.transpose();
  d.colwise() += xx;
  d.rowwise() += cc;
  return d.cwiseMax(0.0);
}

struct BlockStats {
  double log_likelihood = 0.0;
  VectorXd mass;
  MatrixXd first;
  MatrixXd second;
  double worst_ll = std::numeric_limits<double>::infinity();
  Index worst_frame = 0;
};

}  // namespace

DiagGmm::DiagGmm(VectorXd weights, MatrixXd means, MatrixXd variances,
                 FeatureKind kind)
    : weights_(std::move(weights)),
      means_(std::move(means)),
      variances_(std::move(variances)),
      kind_(kind) {
  const Index k = weights_.size();
  if (k < 1) fail(ErrorCode::kInvalidModel, "GMM needs at least one component");
  if (means_.rows() != k || variances_.rows() != k ||
      variances_.cols() != means_.cols() || means_.cols() < 1)
    fail(ErrorCode::kInvalidModel, "GMM parameter shapes disagree");
  if (!weights_.allFinite() || (weights_.array() <= 0.0).any())
    fail(ErrorCode::kInvalidModel, "GMM weights must be positive");
  if (std::abs(weights_.sum() - 1.0) > 1e-9)
    fail(ErrorCode::kInvalidModel, "GMM weights must sum to 1");
  if (!means_.allFinite() || !variances_.allFinite() ||
      (variances_.array() <= 0.0).any())
    fail(ErrorCode::kInvalidModel, "GMM variances must be positive and finite");

  inv_var_ = variances_.cwiseInverse();
  mean_inv_var_ = means_.cwiseProduct(inv_var_);
  mean_sq_inv_var_ = means_.cwiseProduct(mean_inv_var_).rowwise().sum();
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  log_norm_ = weights_.array().log() -
              0.5 * (variances_.array().log() + log_2pi).rowwise().sum();
}

MatrixXd DiagGmm::component_log_likelihoods(const Eigen::Ref<const MatrixXd> &x) const {
  if (x.cols() != dim())
    fail(ErrorCode::kDimensionMismatch,
         "features have dimension " + std::to_string(x.cols()) + ", model expects " +
             std::to_string(dim()));
  MatrixXd quad = x.cwiseAbs2() * inv_var_.transpose() -
                  2.0 * x * mean_inv_var_.transpose();
  quad.rowwise() += mean_sq_inv_var_.transpose();
  MatrixXd out = -0.5 * quad;
  out.rowwise() += log_norm_.transpose();
  return out;
}

VectorXd DiagGmm::frame_log_likelihoods(const Eigen::Ref<const MatrixXd> &x) const {
  return row_log_sum_exp(component_log_likelihoods(x));
}

MatrixXd DiagGmm::posteriors(const Eigen::Ref<const MatrixXd> &x) const {
  MatrixXd l = component_log_likelihoods(x);
  const VectorXd lse = row_log_sum_exp(l);
  l.colwise() -= lse;
  return l.array().exp().matrix();
}

VectorXd variance_floor(const Eigen::Ref<const MatrixXd> &x, double abs_floor,
                        double rel_floor) {
  const RowVectorX<double> mean = x.colwise().mean();
  const VectorXd var =
      ((x.rowwise() - mean).cwiseAbs2().colwise().sum() / static_cast<double>(x.rows()))
          .transpose();
  return (rel_floor * var).cwiseMax(abs_floor);
}

double quantization_distortion(const Eigen::Ref<const MatrixXd> &x,
                               const MatrixXd &means) {
  double total = 0.0;
  for (Index t = 0; t < x.rows(); ++t)
    total += (means.rowwise() - x.row(t)).rowwise().squaredNorm().minCoeff();
  return total;
}

DiagGmm kmeans_init(const Eigen::Ref<const MatrixXd> &x, int num_components,
                    std::uint64_t seed, const VectorXd &floor, FeatureKind kind) {
  const Index t_count = x.rows(), k_count = num_components;
  if (k_count < 1) fail(ErrorCode::kInvalidArgument, "need at least one component");
  if (t_count < k_count)
    fail(ErrorCode::kTooFewFrames, std::to_string(t_count) + " frames for " +
                                       std::to_string(k_count) + " components");
  if (floor.size() != x.cols())
    fail(ErrorCode::kDimensionMismatch, "variance floor dimension mismatch");

  std::mt19937_64 rng(seed);
  MatrixXd centers(k_count, x.cols());
  std::uniform_int_distribution<Index> pick(0, t_count - 1);
  centers.row(0) = x.row(pick(rng));
  VectorXd nearest = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index k = 1; k < k_count; ++k) {
    const double total = nearest.sum();
    Index chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      chosen = t_count - 1;
      for (Index t = 0; t < t_count; ++t) {
        acc += nearest(t);
        if (acc > target && nearest(t) > 0.0) {
          chosen = t;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.row(k) = x.row(chosen);
    nearest = nearest.cwiseMin((x.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }

  std::vector<Index> assign(static_cast<std::size_t>(t_count), -1);
  VectorXd counts(k_count);
  for (int iter = 0; iter < 20; ++iter) {
    const MatrixXd d = squared_distances(x, centers);
    bool changed = false;
    VectorXd best_dist(t_count);
    for (Index t = 0; t < t_count; ++t) {
      Index best;
      best_dist(t) = d.row(t).minCoeff(&best);
      if (assign[static_cast<std::size_t>(t)] != best) {
        assign[static_cast<std::size_t>(t)] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    MatrixXd sums = MatrixXd::Zero(k_count, x.cols());
    counts.setZero();
    for (Index t = 0; t < t_count; ++t) {
      sums.row(assign[static_cast<std::size_t>(t)]) += x.row(t);
      counts(assign[static_cast<std::size_t>(t)]) += 1.0;
    }
    for (Index k = 0; k < k_count; ++k) {
      if (counts(k) > 0.0) {
        centers.row(k) = sums.row(k) / counts(k);
      } else {
        // Empty cluster: move it onto the worst-represented frame.
        Index far;
        best_dist.maxCoeff(&far);
        centers.row(k) = x.row(far);
        best_dist(far) = 0.0;
      }
    }
  }

  // Final assignment against the final centres.
  const MatrixXd d = squared_distances(x, centers);
  counts.setZero();
  MatrixXd sums = MatrixXd::Zero(k_count, x.cols());
  MatrixXd sq = MatrixXd::Zero(k_count, x.cols());
  for (Index t = 0; t < t_count; ++t) {
    Index best;
    d.row(t).minCoeff(&best);
    counts(best) += 1.0;
    sums.row(best) += x.row(t);
  }
  for (Index k = 0; k < k_count; ++k)
    if (counts(k) > 0.0) centers.row(k) = sums.row(k) / counts(k);
  for (Index t = 0; t < t_count; ++t) {
    Index best;
    d.row(t).minCoeff(&best);
    sq.row(best) += (x.row(t) - centers.row(best)).cwiseAbs2();
  }
  VectorXd weights(k_count);
  MatrixXd variances(k_count, x.cols());
  for (Index k = 0; k < k_count; ++k) {
    const double n = std::max(counts(k), 1.0);
    weights(k) = n;
    variances.row(k) = (sq.row(k) / n).cwiseMax(floor.transpose());
  }
  weights /= weights.sum();
  return DiagGmm(weights, centers, variances, kind);
}

EmResult em_fit(const Eigen::Ref<const MatrixXd> &x, int num_components,
                const EmOptions &options, FeatureKind kind) {
  const Index t_count = x.rows(), k_count = num_components;
  if (k_count < 1) fail(ErrorCode::kInvalidArgument, "need at least one component");
  if (t_count < 10 * k_count)
    fail(ErrorCode::kTooFewFrames,
         std::to_string(t_count) + " frames is fewer than 10 per component (K=" +
             std::to_string(k_count) + ")");
  const VectorXd floor = variance_floor(x, options.abs_var_floor, options.rel_var_floor);
  const VectorXd global_var = variance_floor(x, 0.0, 1.0).cwiseMax(floor);
  DiagGmm model = kmeans_init(x, num_components, options.seed, floor, kind);

  const Index block = std::max<Index>(1, options.block_frames);
  const Index num_blocks = (t_count + block - 1) / block;
  std::vector<BlockStats> stats(static_cast<std::size_t>(num_blocks));

  EmResult result{model, {}, {}};
  for (int iter = 0;; ++iter) {
    parallel_for(static_cast<std::size_t>(num_blocks), options.workers,
                 [&](std::size_t b) {
                   const Index start = static_cast<Index>(b) * block;
                   const Index n = std::min(block, t_count - start);
                   const auto xb = x.middleRows(start, n);
                   MatrixXd l = model.component_log_likelihoods(xb);
                   const VectorXd lse = row_log_sum_exp(l);
                   l.colwise() -= lse;
                   const MatrixXd r = l.array().exp().matrix();
                   BlockStats &s = stats[b];
                   s.log_likelihood = lse.sum();
                   s.mass = r.colwise().sum().transpose();
                   s.first = r.transpose() * xb;
                   s.second = r.transpose() * xb.cwiseAbs2();
                   Index worst;
                   s.worst_ll = lse.minCoeff(&worst);
                   s.worst_frame = start + worst;
                 });
    double ll = 0.0;
    VectorXd mass = VectorXd::Zero(k_count);
    MatrixXd first = MatrixXd::Zero(k_count, x.cols());
    MatrixXd second = MatrixXd::Zero(k_count, x.cols());
    double worst_ll = std::numeric_limits<double>::infinity();
    Index worst_frame = 0;
    for (const BlockStats &s : stats) {
      ll += s.log_likelihood;
      mass += s.mass;
      first += s.first;
      second += s.second;
      if (s.worst_ll < worst_ll) {
        worst_ll = s.worst_ll;
        worst_frame = s.worst_frame;
      }
    }
    const double avg = ll / static_cast<double>(t_count);
    const bool converged = !result.log_likelihood_trace.empty() &&
                           avg - result.log_likelihood_trace.back() < options.tol;
    result.log_likelihood_trace.push_back(avg);
    if (converged || iter >= options.max_iters) break;

    VectorXd weights(k_count);
    MatrixXd means(k_count, x.cols());
    MatrixXd variances(k_count, x.cols());
    for (Index k = 0; k < k_count; ++k) {
      if (mass(k) < kCollapseMass) {
        result.collapses.push_back({iter, k});
        weights(k) = 1.0;
        means.row(k) = x.row(worst_frame);
        variances.row(k) = global_var.transpose();
        continue;
      }
      weights(k) = mass(k);
      means.row(k) = first.row(k) / mass(k);
      variances.row(k) = (second.row(k) / mass(k) - means.row(k).cwiseAbs2())
                             .cwiseMax(floor.transpose());
    }
    weights /= weights.sum();
    model = DiagGmm(weights, means, variances, kind);
  }
  result.model = model;
  return result;
}

double avg_log_likelihood(const DiagGmm &model, const FeatureMatrix &features) {
  if (features.num_frames() < 1)
    fail(ErrorCode::kEmptyFeatures, "cannot score an empty feature matrix");
  if (features.dim() != model.dim())
    fail(ErrorCode::kDimensionMismatch,
         "features have dimension " + std::to_string(features.dim()) +
             ", model expects " + std::to_string(model.dim()));
  if (features.kind != model.kind())
    fail(ErrorCode::kKindMismatch, std::string("features are ") +
                                       std::string(to_string(features.kind)) +
                                       ", model is " + std::string(to_string(model.kind())));
  return model.frame_log_likelihoods(features.values).sum() /
         static_cast<double>(features.num_frames());
}

double gmm_llr(const DiagGmm &bonafide, const DiagGmm &spoof,
               const FeatureMatrix &features) {
  return avg_log_likelihood(bonafide, features) - avg_log_likelihood(spoof, features);
}

TrialScore gmm_score(const DiagGmm &bonafide, const DiagGmm &spoof,
                     const FeatureMatrix &features, const std::string &trial_id,
                     const std::string &system) {
  return {trial_id, gmm_llr(bonafide, spoof, features), system};
}

void save_gmm(const std::filesystem::path &path, const DiagGmm &model) {
  std::ofstream os = io::open_output(path);
  os.write("SPGM", 4);
  io::write_le<std::uint16_t>(os, kGmmFormatVersion);
  io::write_string(os, to_string(model.kind()));
  io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(model.num_components()));
  io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(model.dim()));
  for (Index k = 0; k < model.num_components(); ++k)
    io::write_le<double>(os, model.weights()(k));
  for (const MatrixXd *m : {&model.means(), &model.variances()})
    for (Index k = 0; k < m->rows(); ++k)
      for (Index d = 0; d < m->cols(); ++d) io::write_le<double>(os, (*m)(k, d));
  if (!os) fail(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

DiagGmm load_gmm(const std::filesystem::path &path) {
  std::ifstream is = io::open_input(path);
  io::expect_magic(is, "SPGM");
  const auto version = io::read_le<std::uint16_t>(is);
  if (version != kGmmFormatVersion)
    fail(ErrorCode::kBadFormat, "unsupported GMM format version " + std::to_string(version));
  const FeatureKind kind = parse_feature_kind(io::read_string(is));
  const auto k = io::read_le<std::uint32_t>(is);
  const auto d = io::read_le<std::uint32_t>(is);
  VectorXd w(k);
  MatrixXd means(k, d), vars(k, d);
  for (Index i = 0; i < k; ++i) w(i) = io::read_le<double>(is);
  for (MatrixXd *m : {&means, &vars})
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < d; ++j) (*m)(i, j) = io::read_le<double>(is);
  return DiagGmm(w, means, vars, kind);
}

}  // namespace spoofcm
