// Copyright 2026 The weylmult Authors
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

#ifndef WEYLMULT_ERRORS_HPP
#define WEYLMULT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace weylmult {

/// Base of every error raised by the library. `tag()` is a short stable
/// identifier used by the CLI for its machine-readable stderr line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* tag() const noexcept = 0;
};

/// Precondition on an argument violated (out of range, malformed input).
class ParameterError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "parameter"; }
};

/// Refused because the requested work or memory exceeds a guard.
class ResourceError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "resource"; }
};

/// A value could not be produced (e.g. missing table entry).
class EvaluationError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "evaluation"; }
};

namespace detail {

template <class E>
inline void require(bool cond, const std::string& what) {
  if (!cond) throw E(what);
}

}  // namespace detail
}  // namespace weylmult

#endif  // WEYLMULT_ERRORS_HPP
