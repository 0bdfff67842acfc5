/*
 * Copyright 2026 The fedchain-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDCHAIN_ERROR_HPP_
#define FEDCHAIN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fedchain {

enum class ErrorCode {
  kInvalidArgument,
  kDuplicateDevice,
  kUnknownToken,
  kUnknownDevice,
  kProbeTimeout,
  kParseError,
  kDimensionError,
  kDimensionMismatch,
  kEmptyInput,
  kNumericalDivergence,
  kInsufficientCandidates,
  kMissingShard,
  kBadLink,
  kBadProof,
  kBadAccounting,
  kBadScore,
  kIoError,
  kCorruptExport,
  kNoEligibleDevices,
  kAllUpdatesRejected,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can branch on the kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDuplicateDevice: return "DuplicateDevice";
    case ErrorCode::kUnknownToken: return "UnknownToken";
    case ErrorCode::kUnknownDevice: return "UnknownDevice";
    case ErrorCode::kProbeTimeout: return "ProbeTimeout";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionError: return "DimensionError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNumericalDivergence: return "NumericalDivergence";
    case ErrorCode::kInsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::kMissingShard: return "MissingShard";
    case ErrorCode::kBadLink: return "BadLink";
    case ErrorCode::kBadProof: return "BadProof";
    case ErrorCode::kBadAccounting: return "BadAccounting";
    case ErrorCode::kBadScore: return "BadScore";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kCorruptExport: return "CorruptExport";
    case ErrorCode::kNoEligibleDevices: return "NoEligibleDevices";
    case ErrorCode::kAllUpdatesRejected: return "AllUpdatesRejected";
  }
  return "Unknown";
}

}  // namespace fedchain

#endif  // FEDCHAIN_ERROR_HPP_
