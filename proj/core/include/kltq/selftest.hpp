// Built-in acceptance suite: one deterministic check per shipped guarantee,
// runnable from the CLI and from the test harness.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kltq {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs every acceptance check; randomized suites are driven by the seed.
std::vector<CheckResult> run_acceptance(std::uint64_t seed);

}  // namespace kltq
