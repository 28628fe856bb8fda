/* Copyright 2026 The attreval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ATTREVAL_ERROR_HPP_
#define ATTREVAL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace attreval {

enum class ErrorCode {
  kFormat,            // bad magic, version, or unsupported file type
  kCorruption,        // truncated or inconsistent payload
  kValidation,        // data violates a type invariant
  kIo,                // open/read/write failure
  kResolution,        // manifest references a file that does not exist
  kDomain,            // argument outside the operation's domain
  kInsufficientData,  // not enough observations
  kDegenerateSample,  // e.g. all paired differences are zero
};

const char* ErrorCodeName(ErrorCode code);

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

}  // namespace attreval

#endif  // ATTREVAL_ERROR_HPP_
