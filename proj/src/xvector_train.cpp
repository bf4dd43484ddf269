// src/xvector_train.cpp

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

#include "spoofcm/xvector_train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "spoofcm/parallel.hpp"

namespace spoofcm {

namespace {

int as_target(Label label) { return label == Label::kBonafide ? 1 : 0; }

void append_number(std::string &out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

template <typename Scalar>
void standardize_from(XVectorModel<Scalar> &model, std::span<const LabeledFeatures> data,
                      std::span<const std::size_t> indices) {
  const Index dim = model.dims.input_dim;
  VectorXd sum = VectorXd::Zero(dim), sq = VectorXd::Zero(dim);
  double frames = 0.0;
  for (std::size_t i : indices) {
    const MatrixXd &v = data[i].features.values;
    sum += v.colwise().sum().transpose();
    sq += v.cwiseAbs2().colwise().sum().transpose();
    frames += static_cast<double>(v.rows());
  }
  const VectorXd mean = sum / frames;
  const VectorXd sd = (sq / frames - mean.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt().cwiseMax(1e-5);
  model.input_mean = mean.cast<Scalar>();
  model.input_scale = sd.cwiseInverse().cast<Scalar>();
}

}  // namespace

std::string TrainOptions::canonical() const {
  std::string s = "xvector";
  const auto field = [&s](const char *name, double v) {
    s += ';';
    s += name;
    s += '=';
    append_number(s, v);
  };
  field("tdnn1_dim", dims.tdnn1_dim);
  field("tdnn2_dim", dims.tdnn2_dim);
  field("embedding_dim", dims.embedding_dim);
  field("alpha", focal.alpha);
  field("gamma", focal.gamma);
  field("lr", learning_rate);
  field("momentum", momentum);
  field("epochs", epochs);
  field("batch", batch_size);
  field("crop_frames", crop_frames);
  field("validation_fraction", validation_fraction);
  field("normalize_inputs", normalize_inputs);
  field("seed", static_cast<double>(seed));
  return s;
}

std::uint64_t TrainOptions::digest() const {
  return Fnv1a().update(canonical()).value();
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const LabeledFeatures> data, double fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train, validation;
  for (Label cls : {Label::kBonafide, Label::kSpoof}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i].label == cls) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    const auto n_val = static_cast<std::size_t>(
        std::lround(fraction * static_cast<double>(members.size())));
    validation.insert(validation.end(), members.begin(),
                      members.begin() + static_cast<std::ptrdiff_t>(n_val));
    train.insert(train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_val),
                 members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return {train, validation};
}

template <typename Scalar>
double mean_loss(const XVectorModel<Scalar> &model, std::span<const LabeledFeatures> data,
                 std::span<const std::size_t> indices, const FocalLossParams &focal,
                 int workers) {
  if (indices.empty()) return 0.0;
  std::vector<double> losses(indices.size());
  parallel_for(indices.size(), workers, [&](std::size_t j) {
    const LabeledFeatures &item = data[indices[j]];
    losses[j] = focal_loss(forward(model, item.features).bonafide, as_target(item.label),
                           focal);
  });
  double total = 0.0;
  for (double l : losses) total += l;
  return total / static_cast<double>(losses.size());
}

template <typename Scalar>
TrainState<Scalar> train_xvector(std::span<const LabeledFeatures> data,
                                 const TrainOptions &options) {
  options.focal.validate();
  if (data.empty()) fail(ErrorCode::kEmptyInput, "no training utterances");
  const bool has_bonafide = std::any_of(data.begin(), data.end(), [](const auto &d) {
    return d.label == Label::kBonafide;
  });
  const bool has_spoof = std::any_of(data.begin(), data.end(), [](const auto &d) {
    return d.label == Label::kSpoof;
  });
  if (!has_bonafide || !has_spoof)
    fail(ErrorCode::kSingleClassDataset, "training data must contain both classes");
  if (options.crop_frames < kReceptiveField)
    fail(ErrorCode::kInvalidArgument, "crop must cover the receptive field of " +
                                          std::to_string(kReceptiveField) + " frames");
  if (options.batch_size < 1 || options.epochs < 0)
    fail(ErrorCode::kInvalidArgument, "batch size must be >= 1 and epochs >= 0");
  Index shortest = std::numeric_limits<Index>::max();
  const FeatureKind kind = data.front().features.kind;
  const Index dim = data.front().features.dim();
  for (const auto &d : data) {
    shortest = std::min(shortest, d.features.num_frames());
    if (d.features.dim() != dim)
      fail(ErrorCode::kDimensionMismatch, "utterance " + d.utt_id + " has a different dimension");
    if (d.features.kind != kind)
      fail(ErrorCode::kKindMismatch, "utterance " + d.utt_id + " has a different feature kind");
  }
  if (options.crop_frames > shortest)
    fail(ErrorCode::kCropLongerThanShortestUtterance,
         "crop of " + std::to_string(options.crop_frames) +
             " frames exceeds the shortest utterance (" + std::to_string(shortest) + ")");

  TrainState<Scalar> state;
  state.seed = options.seed;
  std::tie(state.train_indices, state.validation_indices) =
      stratified_split(data, options.validation_fraction, options.seed);

  XVectorDims dims = options.dims;
  dims.input_dim = static_cast<int>(dim);
  XVectorModel<Scalar> model = XVectorModel<Scalar>::initialize(dims, kind, options.seed + 1);
  model.focal = options.focal;
  if (options.normalize_inputs) standardize_from(model, data, state.train_indices);
  state.velocity = XVectorParams<Scalar>::zeros(dims);
  state.model = model;

  std::mt19937_64 rng(options.seed + 2);
  std::vector<std::size_t> order = state.train_indices;
  const std::span<const std::size_t> monitor =
      state.validation_indices.empty() ? std::span<const std::size_t>(state.train_indices)
                                       : std::span<const std::size_t>(state.validation_indices);
  double best = std::numeric_limits<double>::infinity();
  double lr = options.learning_rate;
  const auto batch = static_cast<std::size_t>(options.batch_size);

  struct Sample {
    std::size_t index;
    Index offset;
  };
  std::vector<Sample> samples;
  std::vector<LossGradient<Scalar>> slots;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t n = std::min(batch, order.size() - start);
      samples.clear();
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t idx = order[start + j];
        const Index room = data[idx].features.num_frames() - options.crop_frames;
        std::uniform_int_distribution<Index> pick(0, room);
        samples.push_back({idx, pick(rng)});
      }
      slots.resize(n);
      parallel_for(n, options.workers, [&](std::size_t j) {
        const LabeledFeatures &item = data[samples[j].index];
        slots[j] = backward(model,
                            MatrixXd(item.features.values.middleRows(samples[j].offset,
                                                                     options.crop_frames)),
                            as_target(item.label), options.focal);
      });
      XVectorParams<Scalar> grad = XVectorParams<Scalar>::zeros(dims);
      for (std::size_t j = 0; j < n; ++j) {
        epoch_loss += slots[j].loss;
        for_each_tensor([](auto &acc, const auto &g) { acc += g; }, grad, slots[j].grad);
      }
      const auto scale = static_cast<Scalar>(1.0 / static_cast<double>(n));
      const auto mu = static_cast<Scalar>(options.momentum);
      const auto step = static_cast<Scalar>(lr);
      for_each_tensor(
          [&](auto &w, auto &v, const auto &g) {
            v = mu * v - step * scale * g;
            w += v;
          },
          model.params, state.velocity, grad);
    }
    state.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    const double val = mean_loss(model, data, monitor, options.focal, options.workers);
    state.validation_loss.push_back(val);
    state.learning_rate.push_back(lr);
    state.epoch = epoch + 1;
    if (val < best) {
      best = val;
      state.best_epoch = epoch;
      state.model = model;
    } else {
      lr *= 0.5;
    }
  }
  return state;
}

template TrainState<float> train_xvector<float>(std::span<const LabeledFeatures>,
                                                const TrainOptions &);
template TrainState<double> train_xvector<double>(std::span<const LabeledFeatures>,
                                                  const TrainOptions &);
template double mean_loss<float>(const XVectorModel<float> &, std::span<const LabeledFeatures>,
                                 std::span<const std::size_t>, const FocalLossParams &, int);
template double mean_loss<double>(const XVectorModel<double> &,
                                  std::span<const LabeledFeatures>,
                                  std::span<const std::size_t>, const FocalLossParams &, int);

}  // namespace spoofcm
