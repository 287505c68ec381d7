// Copyright 2026 The biped-icpm Authors
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

#ifndef BIPED_ERRORS_HPP
#define BIPED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace biped {

// Invalid user input: parameters, config keys, dimensions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The hybrid execution could not complete a step (fall, velocity reversal,
// missed section crossing, budget exhaustion).
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular systems, non-convergent solvers, quadrature failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace biped

#endif  // BIPED_ERRORS_HPP
