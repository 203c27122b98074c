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

#include <numeric>
#include <span>

namespace sensel {

// Index i whose half-open cumulative interval [c_{i-1}, c_i) contains
// u * sum(mass), for u in [0, 1). Zero-mass entries are never returned while
// any mass is positive; a draw landing on a boundary goes to the higher index.
template <typename T>
std::size_t select_proportional(std::span<const T> mass, double u) {
  const double total = static_cast<double>(std::accumulate(mass.begin(), mass.end(), T{}));
  const double target = u * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (!(mass[i] > T{})) continue;
    last_positive = i;
    cum += static_cast<double>(mass[i]);
    if (target < cum) return i;
  }
  return last_positive;
}

}  // namespace sensel
