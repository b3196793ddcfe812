// Copyright 2026 The pulsekit authors
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
#include <utility>

namespace pulsekit {

/// Base class for all toolkit errors. `kind()` is the stable error-class
/// name the CLI prints next to a nonzero exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define PULSEKIT_DEFINE_ERROR(NAME)                \
  class NAME : public Error {                      \
   public:                                         \
    explicit NAME(const std::string& message)      \
        : Error(#NAME, message) {}                 \
  }

PULSEKIT_DEFINE_ERROR(NonHermitianError);
PULSEKIT_DEFINE_ERROR(NoConvergenceError);
PULSEKIT_DEFINE_ERROR(DimensionMismatchError);
PULSEKIT_DEFINE_ERROR(LabelMismatchError);
PULSEKIT_DEFINE_ERROR(ParseError);
PULSEKIT_DEFINE_ERROR(ValidationError);
PULSEKIT_DEFINE_ERROR(MissingAnharmonicityError);
PULSEKIT_DEFINE_ERROR(NonPhysicalT2Error);
PULSEKIT_DEFINE_ERROR(ZeroDetuningError);
PULSEKIT_DEFINE_ERROR(BadShapeParamsError);
PULSEKIT_DEFINE_ERROR(NaNCostError);
PULSEKIT_DEFINE_ERROR(OpenSystemExactGradientUnsupportedError);
PULSEKIT_DEFINE_ERROR(FitDivergenceError);
PULSEKIT_DEFINE_ERROR(InsufficientLengthsError);
PULSEKIT_DEFINE_ERROR(UnmappedChannelError);
PULSEKIT_DEFINE_ERROR(UsageError);

#undef PULSEKIT_DEFINE_ERROR

}  // namespace pulsekit
