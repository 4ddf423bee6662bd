// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include "kltq/selftest.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  auto results = kltq::run_acceptance(seed);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%s criterion-%02d %s -- %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%d/%d criteria passed (seed %llu)\n",
              static_cast<int>(results.size()) - failures,
              static_cast<int>(results.size()),
              static_cast<unsigned long long>(seed));
  return failures == 0 ? 0 : 1;
}
