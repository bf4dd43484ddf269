// include/spoofcm/types.hpp

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

#ifndef SPOOFCM_TYPES_HPP_
#define SPOOFCM_TYPES_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace spoofcm {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::RowVectorXd;

/// The seven front-ends. Filterbank-energy kinds map onto cepstral kinds by
/// a DCT over the filter axis.
enum class FeatureKind { kLFBE, kMFBE, kIMFBE, kLFCC, kMFCC, kIMFCC, kCQCC };

std::string_view to_string(FeatureKind kind);
/// Case-insensitive; throws kInvalidArgument for unknown names.
FeatureKind parse_feature_kind(std::string_view name);
bool is_cepstral(FeatureKind kind);

enum class Label { kBonafide, kSpoof };

std::string_view to_string(Label label);
Label parse_label(std::string_view name);

enum class Subset { kTrain, kDev, kEval };

std::string_view to_string(Subset subset);
Subset parse_subset(std::string_view name);

/// 64-bit FNV-1a, used for stable configuration digests. Unlike std::hash
/// the value is fixed across platforms and library versions.
class Fnv1a {
 public:
  Fnv1a &update(std::string_view bytes);
  Fnv1a &update(const void *data, std::size_t size);
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace spoofcm

#endif  // SPOOFCM_TYPES_HPP_
