// Copyright 2026 The uqbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace uqbench {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario, solver or method configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a closed-form relation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (samples, config, plan).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: CFL violation, singular system, under-resolved basis.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace uqbench
