#pragma once

// Information thermodynamics of a measuring demon: Shannon/Landauer/Szilard bounds, system
// and memory correlations, and the fluctuation theorem with mutual-information exchange.
//
// Entropies of distributions are in bits here; entropy production stays in nats.

#include <cstddef>
#include <optional>
#include <vector>

#include "qthermo/stochastic.hpp"
#include "qthermo/units.hpp"

namespace qthermo {

// p(x, m) over system state x (rows) and memory state m (columns).
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<std::vector<double>> table);

  std::size_t system_states() const noexcept { return table_.size(); }
  std::size_t memory_states() const noexcept { return table_.front().size(); }
  double operator()(std::size_t x, std::size_t m) const { return table_[x][m]; }

  std::vector<double> system_marginal() const;
  std::vector<double> memory_marginal() const;

  /// I(S:M) = H_S + H_M - H_SM in bits, non-negative.
  double mutual_information_bits() const;
  double joint_entropy_bits() const;

 private:
  std::vector<std::vector<double>> table_;
};

// One conditional kernel P[y | x, m] per memory state. The memory is left untouched.
class FeedbackRule {
 public:
  explicit FeedbackRule(std::vector<TransitionKernel> kernels);

  /// m = 0 leaves the bit alone, m = 1 flips it: drives a correctly read bit to 0.
  static FeedbackRule reset();
  static FeedbackRule identity(std::size_t system_states = 2, std::size_t memory_states = 2);

  std::size_t memory_states() const noexcept { return kernels_.size(); }
  const TransitionKernel& kernel(std::size_t m) const { return kernels_[m]; }

  /// Every kernel is a symmetric permutation, so P[y|x,m] = P[x|y,m].
  bool is_ideal() const noexcept { return ideal_; }

 private:
  std::vector<TransitionKernel> kernels_;
  bool ideal_ = false;
};

struct GiftRow {
  std::size_t x = 0;
  std::size_t m = 0;
  std::size_t y = 0;
  double probability = 0.0;
  double delta_s_bits = 0.0;
  double delta_i_bits = 0.0;
  /// ln(P_F / P_B) evaluated directly from the trajectory probabilities.
  double entropy_production = 0.0;
};

struct GiftReport {
  std::vector<GiftRow> rows;
  double mean_delta_s_bits = 0.0;
  double mean_delta_i_bits = 0.0;
  double mean_entropy_production = 0.0;
  double mean_exp_minus_entropy_production = 0.0;
  bool ideal_feedback = false;
  /// Set for non-ideal feedback: the bits/nats identity is not guaranteed there.
  bool advisory = false;
};

// Averaged energetics of one demon experiment. Work is counted as done ON the system, so
// extraction is negative; entropy_production_nats = ln 2 (delta_S_bits - delta_I_bits).
struct DemonLedger {
  double delta_s_bits = 0.0;
  double delta_i_bits = 0.0;
  double entropy_production_nats = 0.0;
  double work_extracted = 0.0;
  double landauer_cost = 0.0;
};

struct DemonEfficiency {
  double eta = 0.0;
  bool bound_saturated = false;
};

enum class FeedbackKind { reset, identity };

struct DemonConfig {
  double error_rate = 0.0;
  double input_bias = 0.5;  ///< probability that the system bit is 1
  FeedbackKind feedback = FeedbackKind::reset;
  double temperature = 1.0;
  units::UnitSystem units = units::UnitSystem::natural;
};

struct DemonResult {
  GiftReport report;
  DemonLedger ledger;
  double ift_mean = 0.0;
  std::optional<DemonEfficiency> efficiency;  ///< empty when the bound is degenerate
};

/// Binary Shannon entropy in bits, 0 log 0 = 0.
double shannon_entropy_bits(double p);
double shannon_entropy_bits(std::span<const double> distribution);

/// T ln 2 (natural) or k_B T ln 2 joules (SI, T in kelvin).
double szilard_work_bound(double temperature,
                          units::UnitSystem system = units::UnitSystem::natural);

/// Minimal work to erase a memory bit with outcome probability p: T ln 2 H_bits[p].
double landauer_cost(double p, double temperature,
                     units::UnitSystem system = units::UnitSystem::natural);

/// Per-outcome I(x,m) = log2(p(x) p(m)) - log2 p(x,m). Its average is -I(S:M).
double stochastic_mutual_info(const JointDistribution& joint, std::size_t x, std::size_t m);

/// Binary symmetric readout of a bit with error rate in [0, 0.5].
JointDistribution measure_bit(const Distribution& system, double error_rate);

/// Enumerates (x, m, y). delta_i_bits uses the standard-sign pointwise mutual information,
/// log2 p(x,m) - log2 p(x) p(m), which makes ln2 (dS - dI) equal the entropy production.
GiftReport gift_enumerate(const JointDistribution& initial, const FeedbackRule& feedback);

/// eta = W / (dF + T ln2 dI). Throws DegenerateInputError on a zero denominator.
DemonEfficiency demon_efficiency(double work, double delta_f, double delta_i_bits,
                                 double temperature);

DemonResult run_demon(const DemonConfig& config);

}  // namespace qthermo
