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

#include "saliency/error.hpp"

namespace saliency {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return "ok";
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kDimensionMismatch:
      return "dimension mismatch";
    case ErrorCode::kNumerical:
      return "numerical error";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kBudgetExceeded:
      return "budget exceeded";
    case ErrorCode::kInternal:
      return "internal error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t offset)
    : Error(ErrorCode::kParse,
            message + " (line " + std::to_string(line) + ", byte " +
                std::to_string(offset) + ")"),
      line_(line),
      offset_(offset) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace saliency
