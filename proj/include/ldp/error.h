// Copyright 2026 The ldpest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDP_ERROR_H_
#define LDP_ERROR_H_

#include <stdexcept>
#include <string>

namespace ldp {

// Machine-checkable failure categories. kHypothesisViolated and
// kSampleSizeTooSmall indicate that an analytic statement does not apply to
// the requested parameters; everything else is invalid input or misuse.
enum class ErrorCode {
  kTooFewCategories,
  kNegativeEntry,
  kSumNotOne,
  kNonFiniteEntry,
  kDimensionMismatch,
  kInvalidD,
  kWrongSubsetSize,
  kCategoryOutOfRange,
  kInvalidObservation,
  kAlphabetTooLarge,
  kEntryOutOfCube,
  kNotPrivate,
  kEmptySample,
  kDegenerateBudget,
  kHypothesisViolated,
  kSampleSizeTooSmall,
  kOddK,
  kTOutOfRange,
  kInvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ldp

#endif  // LDP_ERROR_H_
