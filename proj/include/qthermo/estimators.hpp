#pragma once

// Fluctuation-theorem estimators and the exhaustive enumeration oracle they are checked
// against.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qthermo/stochastic.hpp"

namespace qthermo {

inline constexpr std::uint64_t kEnumerationRowLimit = 10'000'000;
inline constexpr std::size_t kBatchCount = 32;

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  double absolute_irreversibility_fraction = 0.0;

  /// "equal" when |mean - target| <= sigmas * std_error, "not-equal" otherwise, and
  /// "le-expected" whenever absolutely irreversible trajectories were seen (the fluctuation
  /// theorem then only promises mean <= target).
  std::string verdict(double target, double sigmas = 4.0) const;
};

struct EnumeratedTrajectory {
  Trajectory trajectory;
  double probability = 0.0;
  /// Empty for trajectories the forward protocol can never produce.
  std::optional<TrajectoryLedger> ledger;
};

struct EnumerationReport {
  std::vector<EnumeratedTrajectory> rows;
  double mean_entropy_production = 0.0;
  double mean_exp_minus_entropy_production = 0.0;
  double mean_work = 0.0;
  double mean_heat = 0.0;
  double mean_exp_minus_work_over_t = 0.0;
  /// Forward probability carried by trajectories whose reverse is impossible.
  double absolute_irreversibility_mass = 0.0;
  double temperature = 1.0;
};

struct SecondLawVerdict {
  bool holds = false;
  double margin = 0.0;
};

struct JarzynskiResult {
  EstimatorResult estimate;
  double target = 0.0;  ///< exp(-dF/T)
};

/// Number of rows enumerate_exact would produce, saturating at UINT64_MAX.
std::uint64_t enumeration_row_count(const Protocol& protocol);

/// Every trajectory with its exact probability and ledger. Throws CapacityError above
/// kEnumerationRowLimit rows.
EnumerationReport enumerate_exact(const Protocol& protocol, const Distribution& initial,
                                  BackwardBoundary boundary = BackwardBoundary::pushforward);

/// Mean of exp(-entropy production) over n sampled trajectories; batch-means std error.
EstimatorResult ift_estimate(const Protocol& protocol, const Distribution& initial,
                             std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

/// Mean of exp(-W/T) with the initial state drawn from the initial Boltzmann distribution.
JarzynskiResult jarzynski_estimate(const Protocol& protocol, double temperature, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers = 1);

/// Same, for callers that carry an explicit initial distribution; it must be the initial
/// Boltzmann distribution (ConfigError otherwise).
JarzynskiResult jarzynski_estimate(const Protocol& protocol, const Distribution& initial,
                                   double temperature, std::uint64_t n, std::uint64_t seed,
                                   unsigned workers = 1);

struct MarginalAverages {
  double mean_work = 0.0;
  double mean_heat = 0.0;
};

/// <W> and <Q> from the checkpoint marginals; cost linear in the protocol length, so it applies
/// where enumerate_exact would exceed its row limit.
MarginalAverages marginal_averages(const Protocol& protocol, const Distribution& initial);

SecondLawVerdict second_law_check(const EnumerationReport& report);

/// Batch-means summary of per-sample values (kBatchCount contiguous batches, pairwise
/// summation inside each batch, batches reduced in order).
EstimatorResult summarize_samples(std::span<const double> values, std::uint64_t irreversible_count);

}  // namespace qthermo
