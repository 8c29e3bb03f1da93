// Copyright 2026 The narrative_eq Authors
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

#ifndef NARRATIVE_EQ_ERRORS_HPP_
#define NARRATIVE_EQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace narrative_eq {

// Base class for every error raised by the library. The exit code is what the
// command-line tool returns when the error escapes a subcommand.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const { return 1; }
};

// Malformed input: bad history length, unparsable rational, unknown rule.
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

// A configured cap (K, class count) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

// A precondition on a structured argument failed, e.g. a profile handed to
// reduce_step is not an equilibrium or a preimage is not contiguous.
class ContractError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

// Floating-point pathway produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

// The model space has a single bliss class, so a threshold is undefined.
class DegenerateCaseError : public Error {
 public:
  using Error::Error;
};

// A closed form was requested outside the range where it is proven.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// A property guaranteed by the theory failed; always a bug.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace narrative_eq

#endif  // NARRATIVE_EQ_ERRORS_HPP_
