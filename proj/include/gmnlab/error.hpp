// Copyright 2026 The gmnlab Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmnlab {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  BadDim,
  BadTrace,
  NotPSD,
  NotNormalized,
  SolverFailure,
  InfeasibleNumerics,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BadDim: return "BadDim";
    case ErrorCode::BadTrace: return "BadTrace";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::InfeasibleNumerics: return "InfeasibleNumerics";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Library-wide exception. The message always starts with the error code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gmnlab
