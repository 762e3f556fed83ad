// Copyright 2026 The memecover Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMECOVER_ERROR_HPP_
#define MEMECOVER_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace memecover {

enum class ErrorCode {
  kMalformedRecord,
  kEmptyCorpus,
  kTooFewFollowees,
  kUnknownUser,
  kInfeasibleCover,
  kTooLarge,
  kEmptyFollowees,
  kZeroInflow,
  kNoMemes,
  kInvalidOriginal,
  kEmptyMembers,
  kTooFewMembers,
  kEmptyOptimal,
  kDegenerateVariance,
  kInvalidSpec,
  kInvalidConfig,
  kIo,
  kInvariantViolation,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace memecover

#endif  // MEMECOVER_ERROR_HPP_
