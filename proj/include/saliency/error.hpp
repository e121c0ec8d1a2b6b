/* Copyright 2026 The Saliency Authors. All Rights Reserved.

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

#ifndef SALIENCY_ERROR_HPP_
#define SALIENCY_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace saliency {

// Numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kNumerical = 3,
  kParse = 4,
  kIo = 5,
  kBudgetExceeded = 6,
  kInternal = 7,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed input file. `line` is 1-based and 0 when not applicable;
// `offset` is the byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t offset);
  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

}  // namespace saliency

#endif  // SALIENCY_ERROR_HPP_
