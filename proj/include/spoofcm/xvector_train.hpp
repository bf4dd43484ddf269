// include/spoofcm/xvector_train.hpp

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

#ifndef SPOOFCM_XVECTOR_TRAIN_HPP_
#define SPOOFCM_XVECTOR_TRAIN_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spoofcm/xvector.hpp"

namespace spoofcm {

struct LabeledFeatures {
  std::string utt_id;
  FeatureMatrix features;
  Label label = Label::kBonafide;
};

struct TrainOptions {
  XVectorDims dims;  // input_dim is taken from the data
  FocalLossParams focal;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int epochs = 30;
  int batch_size = 64;
  int crop_frames = 150;
  double validation_fraction = 0.2;
  bool normalize_inputs = true;
  std::uint64_t seed = 42;
  int workers = 1;

  std::string canonical() const;
  std::uint64_t digest() const;
};

template <typename Scalar>
struct TrainState {
  XVectorModel<Scalar> model;      // best validation loss so far
  XVectorParams<Scalar> velocity;  // SGD momentum buffers
  int epoch = 0;
  std::uint64_t seed = 0;
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  std::vector<double> learning_rate;
  int best_epoch = -1;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;
};

/// Stratified split: round(fraction * n_c) utterances of each class go to
/// validation, chosen by a seeded shuffle. Returns (train, validation).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const LabeledFeatures> data, double fraction, std::uint64_t seed);

/// Trains with focal loss and momentum SGD on fixed-length random crops,
/// halving the learning rate whenever validation loss fails to improve.
/// Deterministic for a given seed.
template <typename Scalar>
TrainState<Scalar> train_xvector(std::span<const LabeledFeatures> data,
                                 const TrainOptions &options);

/// Mean focal loss over whole utterances.
template <typename Scalar>
double mean_loss(const XVectorModel<Scalar> &model, std::span<const LabeledFeatures> data,
                 std::span<const std::size_t> indices, const FocalLossParams &focal,
                 int workers = 1);

extern template TrainState<float> train_xvector<float>(std::span<const LabeledFeatures>,
                                                       const TrainOptions &);
extern template TrainState<double> train_xvector<double>(std::span<const LabeledFeatures>,
                                                         const TrainOptions &);

}  // namespace spoofcm

#endif  // SPOOFCM_XVECTOR_TRAIN_HPP_
