/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOOTPRINT_ERROR_H_
#define FOOTPRINT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace footprint {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidTransform,
  kMalformedRecord,
  kInvariantViolation,
  kDuplicateFrameIndex,
  kUnknownFrame,
  kShapeMismatch,
  kNonFiniteValue,
  kEmptyGroundTruth,
  kEmptyLocations,
  kInfeasibleSpec,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. `line()` is the
// 1-based input line for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int line = 0);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  ErrorCode code_;
  int line_;
};

}  // namespace footprint

#endif  // FOOTPRINT_ERROR_H_
