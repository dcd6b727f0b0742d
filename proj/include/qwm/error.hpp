// Copyright 2026 The qwm Authors
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

namespace qwm {

/// Failure categories shared by the C++ core and the C API.
enum class ErrorKind {
  kInvalidArgument,
  kInvalidGraph,
  kInvalidSpec,          // configuration / experiment spec problems
  kConstraintViolation,  // coin-shift unitarity constraint broken
  kNumerical,            // a numerical self-check failed
  kUnsupported,
  kSize,                 // input too large for an exhaustive routine
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace qwm
