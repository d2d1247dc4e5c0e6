// Copyright 2026 The qinst Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qinst {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or qubit locations that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf entries, non-unitary input where a unitary is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Requested size exceeds a hard guard (state count, qubit count).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Qubit index outside the declared register.
class BoundsError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Circuit contains something the QASM writer cannot express.
class UnsupportedExportError : public Error {
 public:
  using Error::Error;
};

class InfeasiblePartitionError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant, e.g. reading a stale cache entry.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qinst
