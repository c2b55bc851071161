// Copyright 2026 The SBN Authors
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

#ifndef SBN_ERROR_H_
#define SBN_ERROR_H_

#include <stdexcept>
#include <string>

namespace sbn {

// Base of every error thrown by the library. The CLI maps the subclasses onto
// exit codes: usage/validation (2), capacity (3), internal invariant (4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph shape is wrong: cycles, missing nodes, incomplete tables.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A strategy profile does not fit the graph it is bound to.
class BindingError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A finite resource bound (support size, truncation cap, overflow) was hit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Malformed input document. Carries a 1-based line/column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ")"
                       : what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Something that validation should have prevented happened anyway.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbn

#endif  // SBN_ERROR_H_
