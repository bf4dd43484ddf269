// src/types.cpp

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

#include "spoofcm/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "spoofcm/error.hpp"

namespace spoofcm {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

constexpr std::array<FeatureKind, 7> kAllKinds = {
    FeatureKind::kLFBE, FeatureKind::kMFBE,  FeatureKind::kIMFBE,
    FeatureKind::kLFCC, FeatureKind::kMFCC,  FeatureKind::kIMFCC,
    FeatureKind::kCQCC};

}  // namespace

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kLFBE: return "LFBE";
    case FeatureKind::kMFBE: return "MFBE";
    case FeatureKind::kIMFBE: return "IMFBE";
    case FeatureKind::kLFCC: return "LFCC";
    case FeatureKind::kMFCC: return "MFCC";
    case FeatureKind::kIMFCC: return "IMFCC";
    case FeatureKind::kCQCC: return "CQCC";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view name) {
  const std::string key = upper(name);
  for (FeatureKind k : kAllKinds)
    if (to_string(k) == key) return k;
  fail(ErrorCode::kInvalidArgument,
       "unknown feature kind '" + std::string(name) + "'");
}

bool is_cepstral(FeatureKind kind) {
  return kind == FeatureKind::kLFCC || kind == FeatureKind::kMFCC ||
         kind == FeatureKind::kIMFCC || kind == FeatureKind::kCQCC;
}

std::string_view to_string(Label label) {
  return label == Label::kBonafide ? "bonafide" : "spoof";
}

Label parse_label(std::string_view name) {
  if (name == "bonafide") return Label::kBonafide;
  if (name == "spoof") return Label::kSpoof;
  fail(ErrorCode::kInvalidArgument, "unknown label '" + std::string(name) + "'");
}

std::string_view to_string(Subset subset) {
  switch (subset) {
    case Subset::kTrain: return "train";
    case Subset::kDev: return "dev";
    case Subset::kEval: return "eval";
  }
  return "?";
}

Subset parse_subset(std::string_view name) {
  if (name == "train") return Subset::kTrain;
  if (name == "dev") return Subset::kDev;
  if (name == "eval") return Subset::kEval;
  fail(ErrorCode::kInvalidArgument,
       "unknown subset '" + std::string(name) + "'");
}

Fnv1a &Fnv1a::update(std::string_view bytes) {
  return update(bytes.data(), bytes.size());
}

Fnv1a &Fnv1a::update(const void *data, std::size_t size) {
  const auto *p = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state_ ^= p[i];
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

}  // namespace spoofcm
