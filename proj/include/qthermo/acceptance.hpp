#pragma once

// The acceptance suite behind the `verify` experiment. Each check returns a verdict and a
// detail string. Details hold only seed-determined numbers printed with 17 significant digits,
// so two runs with the same seed produce identical text whatever the worker count.

#include <cstdint>
#include <string>
#include <vector>

namespace qthermo {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;  ///< wall clock; kept out of `detail`
};

inline constexpr int kCriterionCount = 10;

/// Runs criteria 1..10. Criterion 10 re-runs 1..9 with a different worker count and compares
/// the detail strings byte for byte.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, unsigned workers);

/// A single criterion in 1..9.
CriterionResult run_criterion(int id, std::uint64_t seed, unsigned workers);

}  // namespace qthermo
