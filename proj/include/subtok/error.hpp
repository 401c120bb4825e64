// Copyright 2026 The subtok Authors
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

#ifndef SUBTOK_ERROR_HPP_
#define SUBTOK_ERROR_HPP_

#include <stdexcept>

namespace subtok {

// Base class of all library errors. The CLI maps any of these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: invalid UTF-8, unparseable vocabulary line, ...
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally well-formed input that violates a model invariant
// (duplicate surface, raw space inside a piece, non-finite score, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Unsatisfiable configuration, e.g. a vocabulary target smaller than the
// corpus alphabet.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Extension requested on a corpus that introduces no new letters.
// Callers may treat this as a no-op.
class EmptyExtensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace subtok

#endif  // SUBTOK_ERROR_HPP_
