// Copyright 2026 The Authors.
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

#ifndef CVXSUB_ERRORS_HPP
#define CVXSUB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cvxsub {

// A caller violated a documented precondition (bad argument, mismatched
// ground sets, infeasible input set, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// An instance is too large for an exact/enumerative routine.
class SizeError : public std::runtime_error {
 public:
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed: non-finite iterate, projection did not
// converge within its budget, ...
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Invalid experiment configuration (unknown field, bad value, missing file).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or insufficient input data (ratings files etc).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvxsub

#endif  // CVXSUB_ERRORS_HPP
