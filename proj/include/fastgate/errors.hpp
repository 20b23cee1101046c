// Copyright 2026 The Fastgate Authors.
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

#include <stdexcept>
#include <string>

namespace fastgate {

/// Precondition violation in a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No realizable pulse train exists for the requested timings.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adjacent expanded kick groups share time slots.
class OverlapError : public InfeasibleError {
 public:
  OverlapError(std::size_t first_group, std::size_t second_group, double gap_s)
      : InfeasibleError("kick groups " + std::to_string(first_group + 1) + " and " +
                        std::to_string(second_group + 1) +
                        " overlap after expansion (gap " + std::to_string(gap_s) + " s)"),
        first_(first_group),
        second_(second_group) {}

  std::size_t first_group() const { return first_; }
  std::size_t second_group() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// An iterative solve did not converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fastgate
