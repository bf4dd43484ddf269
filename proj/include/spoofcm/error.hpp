// include/spoofcm/error.hpp

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

#ifndef SPOOFCM_ERROR_HPP_
#define SPOOFCM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace spoofcm {

/// Every failure the library can report. The CLI maps each code to a
/// distinct process exit status (see exit_code()).
enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kNotFound,
  kMalformedHeader,
  kUnsupportedChannelLayout,
  kUnsupportedEncoding,
  kSignalTooShort,
  kBadFftSize,
  kBadBand,
  kBandOutOfRange,
  kDimensionMismatch,
  kTooManyCeps,
  kBadFormat,
  kTooFewFrames,
  kKindMismatch,
  kEmptyFeatures,
  kInvalidModel,
  kUtteranceTooShort,
  kSingleClassDataset,
  kCropLongerThanShortestUtterance,
  kDegenerateScores,
  kEmptyInput,
  kTrialIdMismatch,
  kTrialSetMismatch,
  kSingleClassScores,
  kDegenerateOperatingPoint,
  kMalformedLine,
  kDuplicateUtteranceId,
  kLabelAttackMismatch,
  kDuplicateTrialId,
  kConfigError,
};

std::string_view error_code_name(ErrorCode code);

/// Process exit status for a code; 0 is reserved for success, 1 for
/// unexpected failures, and 2 for command-line usage errors.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &message);

}  // namespace spoofcm

#endif  // SPOOFCM_ERROR_HPP_
