#include "qthermo/demon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qthermo/errors.hpp"

namespace qthermo {
namespace {

constexpr double kTolerance = 1e-12;

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
  }
}

void require_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("temperature must be positive");
}

double plogp2(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

bool is_symmetric_permutation(const TransitionKernel& k) {
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      const double v = k(i, j);
      if (v != 0.0 && v != 1.0) return false;
      if (v != k(j, i)) return false;
    }
  }
  return true;
}

}  // namespace

JointDistribution::JointDistribution(std::vector<std::vector<double>> table)
    : table_(std::move(table)) {
  if (table_.empty() || table_.front().empty()) throw ConfigError("joint distribution is empty");
  double total = 0.0;
  for (const auto& row : table_) {
    if (row.size() != table_.front().size()) throw ConfigError("joint distribution is ragged");
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("joint probability outside [0,1]");
      total += p;
    }
  }
  if (std::abs(total - 1.0) > kTolerance) {
    throw ConfigError("joint distribution sums to " + std::to_string(total));
  }
}

std::vector<double> JointDistribution::system_marginal() const {
  std::vector<double> out(system_states(), 0.0);
  for (std::size_t x = 0; x < system_states(); ++x) {
    out[x] = std::accumulate(table_[x].begin(), table_[x].end(), 0.0);
  }
  return out;
}

std::vector<double> JointDistribution::memory_marginal() const {
  std::vector<double> out(memory_states(), 0.0);
  for (const auto& row : table_) {
    for (std::size_t m = 0; m < row.size(); ++m) out[m] += row[m];
  }
  return out;
}

double JointDistribution::joint_entropy_bits() const {
  double h = 0.0;
  for (const auto& row : table_) {
    for (double p : row) h -= plogp2(p);
  }
  return h;
}

double JointDistribution::mutual_information_bits() const {
  const double i = shannon_entropy_bits(system_marginal()) +
                   shannon_entropy_bits(memory_marginal()) - joint_entropy_bits();
  return std::max(i, 0.0);
}

FeedbackRule::FeedbackRule(std::vector<TransitionKernel> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.empty()) throw ConfigError("feedback rule needs one kernel per memory state");
  ideal_ = true;
  for (const auto& k : kernels_) {
    if (k.size() != kernels_.front().size()) throw ConfigError("feedback kernels differ in size");
    ideal_ = ideal_ && is_symmetric_permutation(k);
  }
}

FeedbackRule FeedbackRule::reset() {
  return FeedbackRule({TransitionKernel::identity(2), TransitionKernel({{0.0, 1.0}, {1.0, 0.0}})});
}

FeedbackRule FeedbackRule::identity(std::size_t system_states, std::size_t memory_states) {
  return FeedbackRule(
      std::vector<TransitionKernel>(memory_states, TransitionKernel::identity(system_states)));
}

double shannon_entropy_bits(double p) {
  require_probability(p, "probability");
  return -plogp2(p) - plogp2(1.0 - p);
}

double shannon_entropy_bits(std::span<const double> distribution) {
  double h = 0.0;
  for (double p : distribution) h -= plogp2(p);
  return h;
}

double szilard_work_bound(double temperature, units::UnitSystem system) {
  require_temperature(temperature);
  return units::thermal_energy(temperature, system) * units::kLn2;
}

double landauer_cost(double p, double temperature, units::UnitSystem system) {
  require_probability(p, "erasure probability");
  require_temperature(temperature);
  return units::thermal_energy(temperature, system) * units::kLn2 * shannon_entropy_bits(p);
}

double stochastic_mutual_info(const JointDistribution& joint, std::size_t x, std::size_t m) {
  if (x >= joint.system_states() || m >= joint.memory_states()) {
    throw DomainError("joint index out of range");
  }
  const double pxm = joint(x, m);
  if (pxm == 0.0) {
    throw DomainError("stochastic mutual information undefined where p(x,m) = 0");
  }
  const double px = joint.system_marginal()[x];
  const double pm = joint.memory_marginal()[m];
  return std::log2(px * pm) - std::log2(pxm);
}

JointDistribution measure_bit(const Distribution& system, double error_rate) {
  if (system.size() != 2) throw ConfigError("measure_bit needs a two-state system");
  if (!(error_rate >= 0.0 && error_rate <= 0.5)) {
    throw DomainError("error rate must lie in [0, 0.5], got " + std::to_string(error_rate));
  }
  std::vector<std::vector<double>> table(2, std::vector<double>(2));
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t m = 0; m < 2; ++m) {
      table[x][m] = system[x] * (m == x ? 1.0 - error_rate : error_rate);
    }
  }
  return JointDistribution(std::move(table));
}

GiftReport gift_enumerate(const JointDistribution& initial, const FeedbackRule& feedback) {
  if (feedback.memory_states() != initial.memory_states() ||
      feedback.kernel(0).size() != initial.system_states()) {
    throw ConfigError("feedback rule does not match the joint distribution dimensions");
  }
  const std::size_t nx = initial.system_states();
  const std::size_t nm = initial.memory_states();

  std::vector<std::vector<double>> final_table(nx, std::vector<double>(nm, 0.0));
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < nx; ++y) final_table[y][m] += initial(x, m) * feedback.kernel(m)(y, x);
    }
  }
  const JointDistribution final_joint(std::move(final_table));
  const auto p0x = initial.system_marginal();
  const auto p0m = initial.memory_marginal();
  const auto p1y = final_joint.system_marginal();
  const auto p1m = final_joint.memory_marginal();

  GiftReport report;
  report.ideal_feedback = feedback.is_ideal();
  report.advisory = !report.ideal_feedback;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t m = 0; m < nm; ++m) {
      for (std::size_t y = 0; y < nx; ++y) {
        const double forward_conditional = feedback.kernel(m)(y, x);
        const double probability = initial(x, m) * forward_conditional;
        if (probability == 0.0) continue;
        const double backward = final_joint(y, m) * feedback.kernel(m)(x, y);
        GiftRow row{x, m, y, probability};
        row.delta_s_bits = std::log2(p0x[x]) - std::log2(p1y[y]);
        const double i_after = std::log2(final_joint(y, m)) - std::log2(p1y[y] * p1m[m]);
        const double i_before = std::log2(initial(x, m)) - std::log2(p0x[x] * p0m[m]);
        row.delta_i_bits = i_after - i_before;
        row.entropy_production = backward > 0.0 ? std::log(probability / backward)
                                                : std::numeric_limits<double>::infinity();
        report.mean_delta_s_bits += probability * row.delta_s_bits;
        report.mean_delta_i_bits += probability * row.delta_i_bits;
        report.mean_entropy_production += probability * row.entropy_production;
        if (backward > 0.0) {
          report.mean_exp_minus_entropy_production += probability * std::exp(-row.entropy_production);
        }
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

DemonEfficiency demon_efficiency(double work, double delta_f, double delta_i_bits,
                                 double temperature) {
  require_temperature(temperature);
  const double bound = delta_f + temperature * units::kLn2 * delta_i_bits;
  if (std::abs(bound) <= 1e-12 * std::max(1.0, temperature)) {
    throw DegenerateInputError("demon efficiency undefined: dF + T ln2 dI = 0");
  }
  DemonEfficiency out;
  out.eta = work / bound;
  out.bound_saturated = std::abs(out.eta - 1.0) <= 1e-9;
  return out;
}

DemonResult run_demon(const DemonConfig& config) {
  require_probability(config.input_bias, "input bias");
  require_temperature(config.temperature);
  const Distribution system({1.0 - config.input_bias, config.input_bias});
  const JointDistribution joint = measure_bit(system, config.error_rate);
  const FeedbackRule rule =
      config.feedback == FeedbackKind::reset ? FeedbackRule::reset() : FeedbackRule::identity();

  DemonResult out;
  out.report = gift_enumerate(joint, rule);
  out.ift_mean = out.report.mean_exp_minus_entropy_production;

  // Natural-unit thermal energy; SI rescales at the end.
  const double kt = config.temperature;
  const double scale = units::thermal_energy(1.0, config.units);
  DemonLedger& l = out.ledger;
  l.delta_s_bits = out.report.mean_delta_s_bits;
  l.delta_i_bits = out.report.mean_delta_i_bits;
  l.entropy_production_nats = units::kLn2 * (l.delta_s_bits - l.delta_i_bits);
  // Quasi-static restoration of the system from p1(y) back to p0(x) on a flat landscape.
  const double work_on_system = kt * units::kLn2 * l.delta_s_bits;
  l.work_extracted = -work_on_system * scale;
  l.landauer_cost =
      landauer_cost(joint.memory_marginal()[1], config.temperature, config.units);
  try {
    out.efficiency = demon_efficiency(work_on_system, 0.0, l.delta_i_bits, kt);
  } catch (const DegenerateInputError&) {
    out.efficiency.reset();
  }
  return out;
}

}  // namespace qthermo
