// Copyright 2026 The jchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JCHSIM_ERRORS_HPP
#define JCHSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jchsim {

/// Bad arguments: dimension mismatches, invalid sites, malformed parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested excitation sector contains no states.
class EmptySectorError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Iterative solvers and propagators that fail to reach tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem size beyond what the selected simulation mode supports.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration files: unknown keys, wrong types, missing fields.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jchsim

#endif  // JCHSIM_ERRORS_HPP
