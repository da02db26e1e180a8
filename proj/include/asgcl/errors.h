// Copyright 2026 The asgcl Authors.
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

#ifndef ASGCL_ERRORS_H_
#define ASGCL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace asgcl {

// Error families. The CLI maps each onto a fixed process exit code.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the augmented Laplacian has (near-)repeated eigenvalues and
// eigenvalue derivatives are not defined. Callers recover by adding
// symmetric noise to the adjacency and retrying.
class DegenerateSpectrumError : public NumericError {
 public:
  DegenerateSpectrumError(const std::string& what, double min_gap)
      : NumericError(what), min_gap_(min_gap) {}
  double min_gap() const { return min_gap_; }

 private:
  double min_gap_;
};

}  // namespace asgcl

#endif  // ASGCL_ERRORS_H_
