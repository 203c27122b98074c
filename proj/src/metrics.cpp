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

#include "sensel/metrics.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sensel {

namespace {

void append_real(std::string& line, double x) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  line.append(buf, static_cast<std::size_t>(len));
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
  T out{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad field '" +
                             std::string(field) + "'");
  }
  return out;
}

}  // namespace

void write_csv(std::span<const MetricsRow> rows, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("write_csv: refusing an empty record set");
  out << kCsvHeader << '\n';
  std::string line;
  for (const auto& r : rows) {
    line.clear();
    line += std::to_string(r.trial);
    line += ',';
    line += std::to_string(r.round);
    line += ',';
    append_real(line, r.avg_reward);
    line += ',';
    append_real(line, r.greedy_ratio);
    line += ',';
    line += std::to_string(r.messages_cum);
    line += ',';
    line += std::to_string(r.activations_cum);
    line += ',';
    append_real(line, r.regret_avg);
    line += '\n';
    out << line;
  }
}

std::string to_csv(std::span<const MetricsRow> rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

void write_csv(std::span<const MetricsRow> rows, const std::filesystem::path& path) {
  if (rows.empty()) throw std::invalid_argument("write_csv: refusing an empty record set");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<MetricsRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<MetricsRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::string_view fields[7];
    for (int i = 0; i < 7; ++i) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (i == 6)) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 7 fields");
      }
      fields[i] = rest.substr(0, comma);
      if (i < 6) rest = rest.substr(comma + 1);
    }
    MetricsRow r;
    r.trial = parse_field<std::int64_t>(fields[0], line_no);
    r.round = parse_field<std::int64_t>(fields[1], line_no);
    r.avg_reward = parse_field<double>(fields[2], line_no);
    r.greedy_ratio = parse_field<double>(fields[3], line_no);
    r.messages_cum = parse_field<std::int64_t>(fields[4], line_no);
    r.activations_cum = parse_field<std::int64_t>(fields[5], line_no);
    r.regret_avg = parse_field<double>(fields[6], line_no);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace sensel
