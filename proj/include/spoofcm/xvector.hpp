// include/spoofcm/xvector.hpp

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

#ifndef SPOOFCM_XVECTOR_HPP_
#define SPOOFCM_XVECTOR_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>

#include "spoofcm/error.hpp"
#include "spoofcm/scores.hpp"
#include "spoofcm/spectral.hpp"
#include "spoofcm/types.hpp"

namespace spoofcm {

// Frame-level context of the two TDNN layers. Together they see 9 frames.
inline constexpr std::array<int, 5> kTdnn1Offsets = {-2, -1, 0, 1, 2};
inline constexpr std::array<int, 3> kTdnn2Offsets = {-2, 0, 2};
inline constexpr int kReceptiveField = 9;

inline constexpr double kPoolingVarEpsilon = 1e-10;
inline constexpr double kPoolingStdFloor = 1e-5;
inline constexpr double kProbabilityClamp = 1e-7;

struct XVectorDims {
  int input_dim = 60;
  int tdnn1_dim = 256;
  int tdnn2_dim = 256;
  int embedding_dim = 128;

  bool operator==(const XVectorDims &) const = default;
};

/// Focal loss hyper-parameters; alpha > 0, gamma >= 0.
struct FocalLossParams {
  double alpha = 1.0;
  double gamma = 2.0;

  void validate() const;
};

/// Binary focal loss on p = P(bonafide), y = 1 for bonafide:
///   F = -alpha [ y (1-p)^gamma ln p + (1-y) p^gamma ln(1-p) ].
/// p is clamped to [1e-7, 1-1e-7]. With gamma = 0 and alpha = 1 this is the
/// binary cross-entropy.
inline double focal_loss(double p, int y, const FocalLossParams &params) {
  const double q = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  if (y == 1) return -params.alpha * std::pow(1.0 - q, params.gamma) * std::log(q);
  return -params.alpha * std::pow(q, params.gamma) * std::log1p(-q);
}

/// dF/dp; zero where the clamp is active.
inline double focal_loss_derivative(double p, int y, const FocalLossParams &params) {
  if (p < kProbabilityClamp || p > 1.0 - kProbabilityClamp) return 0.0;
  const double g = params.gamma;
  if (y == 1) {
    const double one_minus = 1.0 - p;
    const double modulation = std::pow(one_minus, g);
    const double dmod = g == 0.0 ? 0.0 : -g * std::pow(one_minus, g - 1.0);
    return -params.alpha * (dmod * std::log(p) + modulation / p);
  }
  const double modulation = std::pow(p, g);
  const double dmod = g == 0.0 ? 0.0 : g * std::pow(p, g - 1.0);
  return -params.alpha * (dmod * std::log1p(-p) - modulation / (1.0 - p));
}

/// All trainable tensors. Weight matrices are (out x in).
template <typename Scalar>
struct XVectorParams {
  MatrixX<Scalar> tdnn1_w;  // H1 x 5D
  VectorX<Scalar> tdnn1_b;
  MatrixX<Scalar> tdnn2_w;  // H2 x 3H1
  VectorX<Scalar> tdnn2_b;
  MatrixX<Scalar> embed_w;  // E x 2H2
  VectorX<Scalar> embed_b;
  MatrixX<Scalar> out_w;    // 2 x E
  VectorX<Scalar> out_b;

  static XVectorParams zeros(const XVectorDims &d) {
    XVectorParams p;
    p.tdnn1_w = MatrixX<Scalar>::Zero(d.tdnn1_dim, kTdnn1Offsets.size() * d.input_dim);
    p.tdnn1_b = VectorX<Scalar>::Zero(d.tdnn1_dim);
    p.tdnn2_w = MatrixX<Scalar>::Zero(d.tdnn2_dim, kTdnn2Offsets.size() * d.tdnn1_dim);
    p.tdnn2_b = VectorX<Scalar>::Zero(d.tdnn2_dim);
    p.embed_w = MatrixX<Scalar>::Zero(d.embedding_dim, 2 * d.tdnn2_dim);
    p.embed_b = VectorX<Scalar>::Zero(d.embedding_dim);
    p.out_w = MatrixX<Scalar>::Zero(2, d.embedding_dim);
    p.out_b = VectorX<Scalar>::Zero(2);
    return p;
  }

  Index size() const {
    Index n = 0;
    for_each_tensor([&n](const auto &t) { n += t.size(); }, *this);
    return n;
  }

  template <typename Other>
  XVectorParams<Other> cast() const {
    XVectorParams<Other> out;
    out.tdnn1_w = tdnn1_w.template cast<Other>();
    out.tdnn1_b = tdnn1_b.template cast<Other>();
    out.tdnn2_w = tdnn2_w.template cast<Other>();
    out.tdnn2_b = tdnn2_b.template cast<Other>();
    out.embed_w = embed_w.template cast<Other>();
    out.embed_b = embed_b.template cast<Other>();
    out.out_w = out_w.template cast<Other>();
    out.out_b = out_b.template cast<Other>();
    return out;
  }
};

/// Calls f(a.t, b.t, ...) for every tensor t, in a fixed order.
template <typename F, typename First, typename... Rest>
void for_each_tensor(F &&f, First &&first, Rest &&...rest) {
  f(first.tdnn1_w, rest.tdnn1_w...);
  f(first.tdnn1_b, rest.tdnn1_b...);
  f(first.tdnn2_w, rest.tdnn2_w...);
  f(first.tdnn2_b, rest.tdnn2_b...);
  f(first.embed_w, rest.embed_w...);
  f(first.embed_b, rest.embed_b...);
  f(first.out_w, rest.out_w...);
  f(first.out_b, rest.out_b...);
}

/// TDNN x2 -> statistics pooling -> embedding -> 2-way softmax. Output node 0
/// is bonafide, node 1 spoof. Inputs are standardised with a fixed
/// per-dimension shift and scale before the first layer.
template <typename Scalar>
struct XVectorModel {
  XVectorDims dims;
  FeatureKind kind = FeatureKind::kMFCC;
  FocalLossParams focal;
  VectorX<Scalar> input_mean;
  VectorX<Scalar> input_scale;
  XVectorParams<Scalar> params;

  /// He-normal weights for ReLU layers, Glorot-normal for the output layer,
  /// zero biases, identity input normalisation.
  static XVectorModel initialize(const XVectorDims &d, FeatureKind kind,
                                 std::uint64_t seed) {
    XVectorModel m;
    m.dims = d;
    m.kind = kind;
    m.input_mean = VectorX<Scalar>::Zero(d.input_dim);
    m.input_scale = VectorX<Scalar>::Ones(d.input_dim);
    m.params = XVectorParams<Scalar>::zeros(d);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto fill = [&](MatrixX<Scalar> &w, double stddev) {
      for (Index j = 0; j < w.cols(); ++j)
        for (Index i = 0; i < w.rows(); ++i)
          w(i, j) = static_cast<Scalar>(stddev * normal(rng));
    };
    const auto he = [](const MatrixX<Scalar> &w) { return std::sqrt(2.0 / w.cols()); };
    fill(m.params.tdnn1_w, he(m.params.tdnn1_w));
    fill(m.params.tdnn2_w, he(m.params.tdnn2_w));
    fill(m.params.embed_w, he(m.params.embed_w));
    fill(m.params.out_w, std::sqrt(2.0 / (m.params.out_w.cols() + 2)));
    return m;
  }

  template <typename Other>
  XVectorModel<Other> cast() const {
    XVectorModel<Other> out;
    out.dims = dims;
    out.kind = kind;
    out.focal = focal;
    out.input_mean = input_mean.template cast<Other>();
    out.input_scale = input_scale.template cast<Other>();
    out.params = params.template cast<Other>();
    return out;
  }
};

/// Rows t - min(o) + o for each offset o, side by side: (T - span) x (|O| D).
template <typename Derived, std::size_t N>
MatrixX<typename Derived::Scalar> splice_frames(const Eigen::MatrixBase<Derived> &x,
                                                const std::array<int, N> &offsets) {
  const int lo = *std::min_element(offsets.begin(), offsets.end());
  const int hi = *std::max_element(offsets.begin(), offsets.end());
  const Index out_rows = x.rows() - (hi - lo);
  if (out_rows < 1)
    fail(ErrorCode::kUtteranceTooShort,
         std::to_string(x.rows()) + " frames cannot fill a context of " +
             std::to_string(hi - lo + 1));
  MatrixX<typename Derived::Scalar> out(out_rows, static_cast<Index>(N) * x.cols());
  for (std::size_t j = 0; j < N; ++j)
    out.middleCols(static_cast<Index>(j) * x.cols(), x.cols()) =
        x.middleRows(offsets[j] - lo, out_rows);
  return out;
}

/// One TDNN layer: ReLU(W concat(x[t+o] for o in offsets) + b), valid
/// convolution over time.
template <typename Derived, std::size_t N>
MatrixX<typename Derived::Scalar> tdnn_forward(
    const Eigen::MatrixBase<Derived> &x, const MatrixX<typename Derived::Scalar> &w,
    const VectorX<typename Derived::Scalar> &b, const std::array<int, N> &offsets) {
  if (w.cols() != static_cast<Index>(N) * x.cols())
    fail(ErrorCode::kDimensionMismatch, "TDNN weight does not match input dimension");
  MatrixX<typename Derived::Scalar> a = splice_frames(x, offsets) * w.transpose();
  a.rowwise() += b.transpose();
  return a.cwiseMax(typename Derived::Scalar(0));
}

/// mean | std over time. std = max(sqrt(var + 1e-10), 1e-5), population
/// variance.
template <typename Derived>
VectorX<typename Derived::Scalar> stats_pooling(const Eigen::MatrixBase<Derived> &h) {
  using Scalar = typename Derived::Scalar;
  if (h.rows() < 1) fail(ErrorCode::kUtteranceTooShort, "pooling needs at least one frame");
  const Index dim = h.cols();
  const VectorX<Scalar> mean = h.colwise().mean().transpose();
  const VectorX<Scalar> var =
      (h.rowwise() - mean.transpose()).cwiseAbs2().colwise().sum().transpose() /
      static_cast<Scalar>(h.rows());
  VectorX<Scalar> out(2 * dim);
  out.head(dim) = mean;
  out.tail(dim) = (var.array() + static_cast<Scalar>(kPoolingVarEpsilon))
                      .sqrt()
                      .max(static_cast<Scalar>(kPoolingStdFloor))
                      .matrix();
  return out;
}

struct Posteriors {
  double bonafide = 0.5;
  double spoof = 0.5;
};

/// Intermediate activations of one forward pass, kept for backward().
template <typename Scalar>
struct ForwardCache {
  MatrixX<Scalar> spliced1, pre1, h1;
  MatrixX<Scalar> spliced2, pre2, h2;
  VectorX<Scalar> mean, raw_std, pooled;
  VectorX<Scalar> embed_pre, embedding;
  VectorX<Scalar> logits;
  Posteriors posteriors;
};

template <typename Scalar>
MatrixX<Scalar> normalize_input(const XVectorModel<Scalar> &m, const MatrixXd &features) {
  if (features.cols() != m.dims.input_dim)
    fail(ErrorCode::kDimensionMismatch,
         "features have dimension " + std::to_string(features.cols()) +
             ", model expects " + std::to_string(m.dims.input_dim));
  if (features.rows() < kReceptiveField)
    fail(ErrorCode::kUtteranceTooShort,
         std::to_string(features.rows()) + " frames; the network needs at least " +
             std::to_string(kReceptiveField));
  MatrixX<Scalar> x = features.cast<Scalar>();
  x.rowwise() -= m.input_mean.transpose();
  x.array().rowwise() *= m.input_scale.transpose().array();
  return x;
}

template <typename Scalar>
ForwardCache<Scalar> forward_cached(const XVectorModel<Scalar> &m, const MatrixXd &features) {
  const XVectorParams<Scalar> &p = m.params;
  ForwardCache<Scalar> c;
  const MatrixX<Scalar> x = normalize_input(m, features);
  c.spliced1 = splice_frames(x, kTdnn1Offsets);
  c.pre1 = c.spliced1 * p.tdnn1_w.transpose();
  c.pre1.rowwise() += p.tdnn1_b.transpose();
  c.h1 = c.pre1.cwiseMax(Scalar(0));
  c.spliced2 = splice_frames(c.h1, kTdnn2Offsets);
  c.pre2 = c.spliced2 * p.tdnn2_w.transpose();
  c.pre2.rowwise() += p.tdnn2_b.transpose();
  c.h2 = c.pre2.cwiseMax(Scalar(0));

  const Index frames = c.h2.rows();
  c.mean = c.h2.colwise().mean().transpose();
  const VectorX<Scalar> var =
      (c.h2.rowwise() - c.mean.transpose()).cwiseAbs2().colwise().sum().transpose() /
      static_cast<Scalar>(frames);
  c.raw_std = (var.array() + static_cast<Scalar>(kPoolingVarEpsilon)).sqrt().matrix();
  c.pooled.resize(2 * c.mean.size());
  c.pooled << c.mean, c.raw_std.cwiseMax(static_cast<Scalar>(kPoolingStdFloor));

  c.embed_pre = p.embed_w * c.pooled + p.embed_b;
  c.embedding = c.embed_pre.cwiseMax(Scalar(0));
  c.logits = p.out_w * c.embedding + p.out_b;
  // Two-way softmax as a logistic of the logit difference.
  const double diff = static_cast<double>(c.logits(0) - c.logits(1));
  c.posteriors.bonafide = 1.0 / (1.0 + std::exp(-diff));
  c.posteriors.spoof = 1.0 / (1.0 + std::exp(diff));
  return c;
}

template <typename Scalar>
void check_kind(const XVectorModel<Scalar> &m, const FeatureMatrix &f) {
  if (f.kind != m.kind)
    fail(ErrorCode::kKindMismatch, std::string("features are ") +
                                       std::string(to_string(f.kind)) + ", model is " +
                                       std::string(to_string(m.kind)));
}

template <typename Scalar>
Posteriors forward(const XVectorModel<Scalar> &m, const MatrixXd &features) {
  return forward_cached(m, features).posteriors;
}

template <typename Scalar>
Posteriors forward(const XVectorModel<Scalar> &m, const FeatureMatrix &f) {
  check_kind(m, f);
  return forward(m, f.values);
}

template <typename Scalar>
struct LossGradient {
  double loss = 0.0;
  Posteriors posteriors;
  XVectorParams<Scalar> grad;
};

/// Focal loss of one utterance and its exact gradient with respect to every
/// parameter. label: 1 = bonafide, 0 = spoof.
template <typename Scalar>
LossGradient<Scalar> backward(const XVectorModel<Scalar> &m, const MatrixXd &features,
                              int label, const FocalLossParams &focal) {
  const XVectorParams<Scalar> &p = m.params;
  const ForwardCache<Scalar> c = forward_cached(m, features);
  LossGradient<Scalar> out;
  out.posteriors = c.posteriors;
  const double pb = c.posteriors.bonafide;
  out.loss = focal_loss(pb, label, focal);
  XVectorParams<Scalar> &g = out.grad;

  // p_b = sigmoid(z0 - z1)  =>  dp_b/dz0 = p_b (1 - p_b) = -dp_b/dz1.
  const double dz0 = focal_loss_derivative(pb, label, focal) * pb * (1.0 - pb);
  VectorX<Scalar> dz(2);
  dz << static_cast<Scalar>(dz0), static_cast<Scalar>(-dz0);
  g.out_w = dz * c.embedding.transpose();
  g.out_b = dz;

  VectorX<Scalar> de = p.out_w.transpose() * dz;
  de = (c.embed_pre.array() > 0).select(de, Scalar(0));
  g.embed_w = de * c.pooled.transpose();
  g.embed_b = de;

  const VectorX<Scalar> dpooled = p.embed_w.transpose() * de;
  const Index h2_dim = c.mean.size();
  const auto frames = static_cast<Scalar>(c.h2.rows());
  const VectorX<Scalar> dmean = dpooled.head(h2_dim);
  const VectorX<Scalar> dstd =
      (c.raw_std.array() > static_cast<Scalar>(kPoolingStdFloor))
          .select(dpooled.tail(h2_dim), Scalar(0));
  // d std_j / d h_tj = (h_tj - mean_j) / (T raw_std_j)
  const VectorX<Scalar> std_coeff = dstd.cwiseQuotient(c.raw_std) / frames;
  MatrixX<Scalar> dh2 = (c.h2.rowwise() - c.mean.transpose());
  dh2.array().rowwise() *= std_coeff.transpose().array();
  dh2.rowwise() += (dmean / frames).transpose();

  const MatrixX<Scalar> da2 = (c.pre2.array() > 0).select(dh2, Scalar(0));
  g.tdnn2_w = da2.transpose() * c.spliced2;
  g.tdnn2_b = da2.colwise().sum().transpose();

  const MatrixX<Scalar> dspliced2 = da2 * p.tdnn2_w;
  MatrixX<Scalar> dh1 = MatrixX<Scalar>::Zero(c.h1.rows(), c.h1.cols());
  const int lo = kTdnn2Offsets.front();
  for (std::size_t j = 0; j < kTdnn2Offsets.size(); ++j)
    dh1.middleRows(kTdnn2Offsets[j] - lo, da2.rows()) +=
        dspliced2.middleCols(static_cast<Index>(j) * c.h1.cols(), c.h1.cols());

  const MatrixX<Scalar> da1 = (c.pre1.array() > 0).select(dh1, Scalar(0));
  g.tdnn1_w = da1.transpose() * c.spliced1;
  g.tdnn1_b = da1.colwise().sum().transpose();
  return out;
}

/// ln p_bonafide - ln p_spoof, i.e. the output logit difference.
template <typename Scalar>
double xvector_llr(const XVectorModel<Scalar> &m, const FeatureMatrix &f) {
  check_kind(m, f);
  const ForwardCache<Scalar> c = forward_cached(m, f.values);
  return static_cast<double>(c.logits(0)) - static_cast<double>(c.logits(1));
}

template <typename Scalar>
TrialScore xvector_score(const XVectorModel<Scalar> &m, const FeatureMatrix &f,
                         const std::string &trial_id, const std::string &system = {}) {
  return {trial_id, xvector_llr(m, f), system};
}

/// Log posterior ratio for a given bonafide posterior.
inline double log_posterior_ratio(double p_bonafide) {
  return std::log(p_bonafide) - std::log1p(-p_bonafide);
}

/// Post-ReLU activations of the embedding layer.
template <typename Scalar>
VectorX<Scalar> extract_embedding(const XVectorModel<Scalar> &m, const FeatureMatrix &f) {
  check_kind(m, f);
  return forward_cached(m, f.values).embedding;
}

// Checkpoint: "SPXV" | u16 version | kind string | u32 D, H1, H2, E |
//   f64 alpha, gamma | u64 training-config digest | f32 input mean[D],
//   input scale[D] | f32 tensors in for_each_tensor order, row-major.
inline constexpr std::uint16_t kXVectorFormatVersion = 1;

void save_xvector(const std::filesystem::path &path, const XVectorModel<float> &model,
                  std::uint64_t config_digest);
XVectorModel<float> load_xvector(const std::filesystem::path &path,
                                 std::uint64_t *config_digest = nullptr);

}  // namespace spoofcm

#endif  // SPOOFCM_XVECTOR_HPP_
