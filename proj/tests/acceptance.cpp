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

// Acceptance suite: one PASS/FAIL line per check, grouped by criterion.
// Exit status is nonzero if any check fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "sensel/checks.hpp"

int main(int argc, char** argv) {
  sensel::checks::CheckOptions options;
  if (const char* env = std::getenv("SENSEL_SEED")) options.seed = std::strtoull(env, nullptr, 10);
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);

  std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(options.seed));
  int failed = 0;
  for (const auto& suite : sensel::checks::acceptance_suites()) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto results = suite.run(options);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      bool all = true;
      for (const auto& r : results) all = all && r.passed;
      std::printf("%s criterion %2d: %s (%.1f s)\n", all ? "PASS" : "FAIL", suite.criterion,
                  suite.title.c_str(), secs);
      for (const auto& r : results) {
        std::printf("    %s  %s: %s\n", r.passed ? "ok  " : "FAIL", r.name.c_str(), r.detail.c_str());
      }
      if (!all) ++failed;
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %2d: %s (error: %s)\n", suite.criterion, suite.title.c_str(),
                  e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, sensel::checks::acceptance_suites().size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
