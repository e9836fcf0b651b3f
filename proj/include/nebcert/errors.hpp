// Copyright 2026 The nebcert Authors
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

namespace nebcert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix or vector violates a physical-state invariant.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: out-of-range parameters, bad list sizes, parse failures.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Gains that no set of yields in [0, 1] could have produced.
class InconsistentStatisticsError : public Error {
 public:
  using Error::Error;
};

}  // namespace nebcert
