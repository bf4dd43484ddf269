// src/error.cpp

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

#include "spoofcm/error.hpp"

namespace spoofcm {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kUnsupportedChannelLayout: return "UnsupportedChannelLayout";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kBadFftSize: return "BadFftSize";
    case ErrorCode::kBadBand: return "BadBand";
    case ErrorCode::kBandOutOfRange: return "BandOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooManyCeps: return "TooManyCeps";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kKindMismatch: return "KindMismatch";
    case ErrorCode::kEmptyFeatures: return "EmptyFeatures";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kUtteranceTooShort: return "UtteranceTooShort";
    case ErrorCode::kSingleClassDataset: return "SingleClassDataset";
    case ErrorCode::kCropLongerThanShortestUtterance:
      return "CropLongerThanShortestUtterance";
    case ErrorCode::kDegenerateScores: return "DegenerateScores";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTrialIdMismatch: return "TrialIdMismatch";
    case ErrorCode::kTrialSetMismatch: return "TrialSetMismatch";
    case ErrorCode::kSingleClassScores: return "SingleClassScores";
    case ErrorCode::kDegenerateOperatingPoint: return "DegenerateOperatingPoint";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDuplicateUtteranceId: return "DuplicateUtteranceId";
    case ErrorCode::kLabelAttackMismatch: return "LabelAttackMismatch";
    case ErrorCode::kDuplicateTrialId: return "DuplicateTrialId";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) { return 10 + static_cast<int>(code); }

void fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

}  // namespace spoofcm
