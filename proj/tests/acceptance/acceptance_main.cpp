// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "qthermo/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--seed") {
      seed = std::strtoull(argv[i + 1], nullptr, 10);
    } else if (flag == "--workers") {
      workers = static_cast<unsigned>(std::strtoul(argv[i + 1], nullptr, 10));
    } else {
      std::fprintf(stderr, "usage: %s [--seed N] [--workers N]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (const auto& r : qthermo::run_acceptance(seed, workers)) {
    std::printf("criterion %2d %s  %-40s %7.2fs  %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    failures += r.passed ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", qthermo::kCriterionCount - failures, qthermo::kCriterionCount);
  return failures == 0 ? 0 : 1;
}
