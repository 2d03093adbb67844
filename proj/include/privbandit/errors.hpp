//
// Copyright 2026 The privbandit Authors
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
//

#ifndef PRIVBANDIT_ERRORS_HPP_
#define PRIVBANDIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace privbandit {

// Invalid algorithm or mechanism parameter (non-positive scale, empty range).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Out-of-domain input value (context outside the unit cube, price outside
// the price bounds).
class InputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Demand model that cannot be used (flat or upward-sloping demand).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A streaming structure was updated beyond its declared horizon.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A policy was driven out of order (wrong period, foreign price).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Undefined arithmetic on results (ratio against a zero denominator).
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or invalid experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing an input or output file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace privbandit

#endif  // PRIVBANDIT_ERRORS_HPP_
