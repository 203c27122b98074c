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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sensel {

struct MetricsRow {
  std::int64_t trial = 0;
  std::int64_t round = 0;
  double avg_reward = 0.0;       // running mean of f_t(S_t)
  double greedy_ratio = 0.0;     // avg_reward over the per-round greedy value
  std::int64_t messages_cum = 0;
  std::int64_t activations_cum = 0;
  double regret_avg = 0.0;       // (1 - 1/e) benchmark / T - avg_reward
};

inline constexpr const char* kCsvHeader =
    "trial,round,avg_reward,greedy_ratio,messages_cum,activations_cum,regret_avg";

// Header plus one line per row, reals at 17 significant digits.
// Throws std::invalid_argument on an empty row set.
void write_csv(std::span<const MetricsRow> rows, std::ostream& out);
std::string to_csv(std::span<const MetricsRow> rows);

// Writes the file at `path`; I/O failures raise std::runtime_error naming it.
void write_csv(std::span<const MetricsRow> rows, const std::filesystem::path& path);

// Parses what write_csv emits. Throws std::runtime_error on malformed input.
std::vector<MetricsRow> read_csv(std::istream& in);

}  // namespace sensel
