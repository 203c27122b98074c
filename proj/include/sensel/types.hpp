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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sensel {

// Sensors are identified by 0..n-1; the order of ids is the linear order
// used for coordinator election and tie-breaking.
using SensorId = std::int32_t;
using SensorSet = std::vector<SensorId>;

// A caller broke an operation's precondition (bad probability, reward out of
// range, non-positive importance weight, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A message was sent in a way the communication model does not allow.
class ModelViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical failure, e.g. a covariance that is not positive definite.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input too large for an exhaustive routine.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace sensel
