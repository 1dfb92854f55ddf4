#include "qthermo/runner.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/core.h>
#include <openssl/evp.h>

#include "json_fields.hpp"
#include "qthermo/acceptance.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/estimators.hpp"
#include "qthermo/parallel.hpp"
#include "qthermo/random.hpp"
#include "qthermo/units.hpp"

namespace qthermo {
namespace {

using detail::FieldReader;
using Bound = FieldReader::Bound;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 9> kKinds = {{
    {ExperimentKind::ift, "ift"},
    {ExperimentKind::jarzynski, "jarzynski"},
    {ExperimentKind::gift, "gift"},
    {ExperimentKind::demon, "demon"},
    {ExperimentKind::quantum, "quantum"},
    {ExperimentKind::engine, "engine"},
    {ExperimentKind::zeno_sweep, "zeno-sweep"},
    {ExperimentKind::gate_cost, "gate-cost"},
    {ExperimentKind::verify, "verify"},
}};

// Temperatures arrive in kelvin and frequencies in rad/s under SI; the engine then works with
// hbar = 1 energies measured in rad/s.
double si_temperature_to_angular(double kelvin) { return units::kBoltzmann * kelvin / units::kHbar; }

void fold(std::vector<std::string>& problems, const std::string& prefix, const ConfigError& e) {
  for (const auto& v : e.violations()) problems.push_back(prefix + ": " + v);
}

GiftParams parse_gift(FieldReader& r) {
  r.only({"error_rate", "input_bias", "feedback"});
  GiftParams p;
  if (auto v = r.number("error_rate", 0.0, Bound::non_negative)) {
    if (*v > 1.0) r.report("error_rate", "must lie in [0,1]");
    p.error_rate = *v;
  }
  if (auto v = r.number("input_bias", 0.5, Bound::non_negative)) {
    if (*v > 1.0) r.report("input_bias", "must lie in [0,1]");
    p.input_bias = *v;
  }
  if (auto v = r.choice("feedback", "reset", {"reset", "identity"})) {
    p.feedback = *v == "reset" ? FeedbackKind::reset : FeedbackKind::identity;
  }
  return p;
}

DemonParams parse_demon(FieldReader& r, bool si) {
  r.only({"error_rate", "input_bias", "feedback", "temperature"});
  DemonParams p;
  if (auto v = r.number("error_rate", 0.0, Bound::non_negative)) {
    if (*v > 1.0) r.report("error_rate", "must lie in [0,1]");
    p.config.error_rate = *v;
  }
  if (auto v = r.number("input_bias", 0.5, Bound::non_negative)) {
    if (*v > 1.0) r.report("input_bias", "must lie in [0,1]");
    p.config.input_bias = *v;
  }
  if (auto v = r.choice("feedback", "reset", {"reset", "identity"})) {
    p.config.feedback = *v == "reset" ? FeedbackKind::reset : FeedbackKind::identity;
  }
  if (auto v = r.number("temperature", si ? 300.0 : 1.0, Bound::positive)) p.config.temperature = *v;
  p.config.units = si ? units::UnitSystem::si : units::UnitSystem::natural;
  return p;
}

std::optional<PureState> named_state(const std::string& name) {
  if (name == "0") return PureState::ground();
  if (name == "1") return PureState::excited();
  if (name == "+") return PureState::plus();
  if (name == "-") return PureState::minus();
  return std::nullopt;
}

// A custom basis is its first vector as [[re, im], [re, im]]; the second is the orthogonal
// complement.
std::optional<MeasurementBasis> custom_basis(const nlohmann::json& v, const std::string& where,
                                             std::vector<std::string>& problems) {
  auto component = [&](const nlohmann::json& c) -> std::optional<Complex> {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) return std::nullopt;
    return Complex(c[0].get<double>(), c[1].get<double>());
  };
  if (!v.is_array() || v.size() != 2) {
    problems.push_back(where + ": must be \"z\", \"x\" or [[re, im], [re, im]]");
    return std::nullopt;
  }
  const auto a = component(v[0]);
  const auto b = component(v[1]);
  if (!a || !b) {
    problems.push_back(where + ": amplitudes must be [re, im] pairs");
    return std::nullopt;
  }
  try {
    const PureState first = PureState::normalized(*a, *b);
    return MeasurementBasis(first, PureState(-std::conj(first[1]), std::conj(first[0])));
  } catch (const DomainError& e) {
    problems.push_back(where + ": " + e.what());
    return std::nullopt;
  }
}

// Segments list Rabi pulses and measurements in time order. Consecutive pulses compose; each
// measurement closes a segment.
QuantumParams parse_quantum(FieldReader& r, std::vector<std::string>& problems) {
  r.only({"omega0", "initial", "segments"});
  QuantumParams p;
  if (auto v = r.number("omega0", 1.0, Bound::positive)) p.omega0 = *v;
  if (auto v = r.choice("initial", "0", {"0", "1", "+", "-"})) p.initial = *named_state(*v);
  if (!r.has("segments") || !r.raw().at("segments").is_array() || r.raw().at("segments").empty()) {
    r.report("segments", "must be a non-empty array");
    return p;
  }
  const auto& list = r.raw().at("segments");
  Unitary2 pending = Unitary2::identity();
  bool has_pending = false;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = r.field_path("segments[" + std::to_string(k) + "]");
    const auto& item = list[k];
    if (!item.is_object() || item.size() != 1 || !(item.contains("rabi") || item.contains("measure"))) {
      problems.push_back(where + ": must be {\"rabi\": {...}} or {\"measure\": ...}");
      continue;
    }
    if (item.contains("rabi")) {
      FieldReader pulse(item.at("rabi"), where + ".rabi", problems);
      if (!pulse.ok()) continue;
      pulse.only({"omega", "t"});
      const auto omega = pulse.number("omega", std::nullopt);
      const auto t = pulse.number("t", std::nullopt, Bound::non_negative);
      if (!omega || !t) continue;
      pending = rabi_propagator(*omega, *t) * pending;
      has_pending = true;
      continue;
    }
    const auto& m = item.at("measure");
    std::optional<MeasurementBasis> basis;
    if (m.is_string() && m.get<std::string>() == "z") {
      basis = MeasurementBasis::energy();
    } else if (m.is_string() && m.get<std::string>() == "x") {
      basis = MeasurementBasis::plus_minus();
    } else if (m.is_string()) {
      problems.push_back(where + ".measure: must be \"z\", \"x\" or [[re, im], [re, im]]");
    } else {
      basis = custom_basis(m, where + ".measure", problems);
    }
    if (!basis) continue;
    p.segments.push_back({pending, basis});
    pending = Unitary2::identity();
    has_pending = false;
  }
  if (has_pending) p.segments.push_back({pending, std::nullopt});
  return p;
}

EngineConfig parse_engine_core(FieldReader& r, bool si) {
  EngineConfig c;
  if (auto v = r.number("omega0", 1.0, Bound::positive)) c.omega0 = *v;
  if (auto v = r.number("omega_rabi", 1.0, Bound::positive)) c.omega_rabi = *v;
  if (auto v = r.number("temp", si ? 0.01 : 0.1, Bound::positive)) {
    c.memory_temperature = si ? si_temperature_to_angular(*v) : *v;
  }
  return c;
}

EngineParams parse_engine(FieldReader& r, bool si, std::uint64_t samples, std::uint64_t seed,
                          std::vector<std::string>& problems) {
  r.only({"omega0", "omega_rabi", "tau", "temp", "cycles"});
  EngineParams p;
  p.config = parse_engine_core(r, si);
  const auto tau = r.number("tau", std::nullopt, Bound::positive);
  if (tau) p.config.tau = *tau;
  if (auto v = r.count("cycles", samples)) {
    if (*v == 0) r.report("cycles", "must be at least 1");
    p.config.n_cycles = *v;
  }
  p.config.seed = seed;
  if (tau) {
    try {
      p.config.validate();
    } catch (const ConfigError& e) {
      fold(problems, "params", e);
    }
  }
  return p;
}

ZenoParams parse_zeno(FieldReader& r, bool si) {
  r.only({"omega0", "omega_rabi", "temp", "grid", "points", "from", "to"});
  ZenoParams p;
  p.config = parse_engine_core(r, si);
  if (r.has("grid")) {
    if (r.has("points") || r.has("from") || r.has("to")) {
      r.report("grid", "cannot be combined with points/from/to");
    }
    if (auto g = r.numbers("grid", true)) p.grid = *g;
    if (r.has("grid") && r.raw().at("grid").is_array() && r.raw().at("grid").empty()) {
      r.report("grid", "must not be empty");
    }
  } else {
    const auto points = r.count("points", 20);
    const auto from = r.number("from", 0.01, Bound::positive);
    const auto to = r.number("to", std::numbers::pi / 2, Bound::positive);
    if (points && *points < 2) r.report("points", "must be at least 2");
    if (points && from && to && *points >= 2) {
      if (!(*from < *to)) r.report("from", "must be smaller than to");
      for (std::uint64_t i = 0; i < *points; ++i) {
        p.grid.push_back(i + 1 == *points ? *to
                                          : *from + (*to - *from) * static_cast<double>(i) /
                                                        static_cast<double>(*points - 1));
      }
    }
  }
  for (double x : p.grid) {
    if (!(x > 0.0 && x < std::numbers::pi)) {
      r.report("grid", fmt::format("value {} is outside (0, pi)", x));
      break;
    }
  }
  return p;
}

GateParams parse_gate(FieldReader& r) {
  r.only({"nbar", "g", "theta", "freq_ghz", "threshold", "calibration"});
  GateParams p;
  if (!r.has("nbar")) {
    p.photons = {25.0, 100.0, 400.0, 1600.0};
  } else if (r.raw().at("nbar").is_number()) {
    if (auto v = r.number("nbar", std::nullopt, Bound::non_negative)) p.photons = {*v};
  } else if (auto v = r.numbers("nbar", true)) {
    p.photons = *v;
    if (p.photons.empty()) r.report("nbar", "must not be empty");
    for (double n : p.photons) {
      if (n < 0.0) {
        r.report("nbar", "photon numbers must be non-negative");
        break;
      }
    }
  }
  if (auto v = r.number("g", 1.0, Bound::positive)) p.coupling = *v;
  if (auto v = r.number("theta", std::numbers::pi / 2, Bound::non_negative)) p.theta = *v;
  if (auto v = r.number("freq_ghz", 6.0, Bound::positive)) p.frequency_hz = *v * 1e9;
  if (r.has("threshold")) {
    if (auto v = r.number("threshold", std::nullopt)) {
      if (!(*v > 0.5 && *v < 1.0)) {
        r.report("threshold", "must lie in (0.5, 1)");
      } else {
        p.threshold = *v;
      }
    }
  }
  if (auto v = r.choice("calibration", "semiclassical", {"semiclassical", "optimized"})) {
    p.calibration = *v == "optimized" ? PulseCalibration::optimized : PulseCalibration::semiclassical;
  }
  return p;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else {
          return v;
        }
      },
      cell);
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return csv_escape(v);
        }
      },
      cell);
}

Cell optional_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

Distribution starting_distribution(const ProtocolDocument& doc) {
  return doc.initial.value_or(
      boltzmann_distribution(doc.protocol.initial_landscape(), doc.protocol.temperature()));
}

ResultTable run_ift(const ExperimentConfig& config, const ProtocolParams& p, unsigned workers) {
  ResultTable t;
  t.columns = {"theorem", "mean", "std_error", "target", "n", "abs_irrev_fraction", "verdict"};
  const Distribution initial = starting_distribution(p.document);
  if (config.exact) {
    const auto report = enumerate_exact(p.document.protocol, initial);
    const double mean = report.mean_exp_minus_entropy_production;
    const std::string verdict = report.absolute_irreversibility_mass > 0.0 ? "le-expected"
                                : std::abs(mean - 1.0) <= 1e-10        ? "equal"
                                                                        : "not-equal";
    t.rows.push_back({std::string("ift"), mean, 0.0, 1.0, static_cast<std::int64_t>(report.rows.size()),
                      report.absolute_irreversibility_mass, verdict});
    const auto second_law = second_law_check(report);
    t.summary = {{"mean_entropy_production", report.mean_entropy_production},
                 {"second_law_holds", second_law.holds},
                 {"mean_work", report.mean_work},
                 {"mean_heat", report.mean_heat}};
  } else {
    const auto r = ift_estimate(p.document.protocol, initial, config.samples, config.seed, workers);
    t.rows.push_back({std::string("ift"), r.mean, r.std_error, 1.0, static_cast<std::int64_t>(r.n_samples),
                      r.absolute_irreversibility_fraction, r.verdict(1.0)});
  }
  t.summary["verdict"] = std::get<std::string>(t.rows.back().back());
  return t;
}

ResultTable run_jarzynski(const ExperimentConfig& config, const ProtocolParams& p, unsigned workers) {
  ResultTable t;
  t.columns = {"theorem", "mean", "std_error", "target", "n", "abs_irrev_fraction", "verdict"};
  const Protocol& protocol = p.document.protocol;
  const double temperature = protocol.temperature();
  if (config.exact) {
    const Distribution p0 = boltzmann_distribution(protocol.initial_landscape(), temperature);
    const auto report = enumerate_exact(protocol, p0, BackwardBoundary::final_equilibrium);
    const double delta_f = free_energy(protocol.final_landscape(), temperature) -
                           free_energy(protocol.initial_landscape(), temperature);
    const double target = std::exp(-delta_f / temperature);
    const double mean = report.mean_exp_minus_work_over_t;
    t.rows.push_back({std::string("jarzynski"), mean, 0.0, target, static_cast<std::int64_t>(report.rows.size()),
                      0.0, std::string(std::abs(mean - target) <= 1e-12 ? "equal" : "not-equal")});
    t.summary = {{"mean_work", report.mean_work}, {"delta_free_energy", delta_f},
                 {"mean_dissipation", report.mean_entropy_production}};
  } else {
    const JarzynskiResult r =
        p.document.initial
            ? jarzynski_estimate(protocol, *p.document.initial, temperature, config.samples, config.seed, workers)
            : jarzynski_estimate(protocol, temperature, config.samples, config.seed, workers);
    t.rows.push_back({std::string("jarzynski"), r.estimate.mean, r.estimate.std_error, r.target,
                      static_cast<std::int64_t>(r.estimate.n_samples), r.estimate.absolute_irreversibility_fraction,
                      r.estimate.verdict(r.target)});
  }
  t.summary["verdict"] = std::get<std::string>(t.rows.back().back());
  return t;
}

ResultTable run_gift(const GiftParams& p) {
  ResultTable t;
  t.columns = {"x", "m", "y", "probability", "dS_bits", "dI_bits", "Si_nats"};
  const auto joint = measure_bit(Distribution({1.0 - p.input_bias, p.input_bias}), p.error_rate);
  const auto report =
      gift_enumerate(joint, p.feedback == FeedbackKind::reset ? FeedbackRule::reset() : FeedbackRule::identity());
  for (const auto& row : report.rows) {
    t.rows.push_back({static_cast<std::int64_t>(row.x), static_cast<std::int64_t>(row.m),
                      static_cast<std::int64_t>(row.y), row.probability, row.delta_s_bits, row.delta_i_bits,
                      row.entropy_production});
  }
  t.summary = {{"mean_dS_bits", report.mean_delta_s_bits},
               {"mean_dI_bits", report.mean_delta_i_bits},
               {"mean_Si_nats", report.mean_entropy_production},
               {"mean_exp_minus_Si", report.mean_exp_minus_entropy_production},
               {"ideal_feedback", report.ideal_feedback},
               {"advisory", report.advisory}};
  return t;
}

ResultTable run_demon_table(const DemonParams& p) {
  ResultTable t;
  t.columns = {"error_rate", "dS_bits", "dI_bits", "Si_nats", "ift_mean", "work_extracted", "landauer_cost", "eta"};
  const auto r = run_demon(p.config);
  const std::optional<double> eta = r.efficiency ? std::optional<double>(r.efficiency->eta) : std::nullopt;
  t.rows.push_back({p.config.error_rate, r.ledger.delta_s_bits, r.ledger.delta_i_bits, r.ledger.entropy_production_nats,
                    r.ift_mean, r.ledger.work_extracted, r.ledger.landauer_cost, optional_cell(eta)});
  t.summary = {{"energy_unit", p.config.units == units::UnitSystem::si ? "J" : "kT=1"},
               {"bound_saturated", r.efficiency ? nlohmann::json(r.efficiency->bound_saturated) : nullptr}};
  return t;
}

ResultTable run_quantum(const ExperimentConfig& config, const QuantumParams& p, unsigned workers) {
  ResultTable t;
  const double scale = config.si ? units::kHbar : 1.0;
  if (config.exact) {
    t.columns = {"outcomes", "probability", "work", "quantum_heat", "entropy_production"};
    const auto branches = enumerate_quantum_branches(p.initial, p.segments, p.omega0);
    double w = 0.0, q = 0.0, s = 0.0;
    for (const auto& b : branches) {
      std::string record;
      for (std::size_t o : b.outcomes) record += (record.empty() ? "" : "-") + std::to_string(o);
      t.rows.push_back({record, b.probability, b.work * scale, b.quantum_heat * scale, b.entropy_production});
      w += b.probability * b.work;
      q += b.probability * b.quantum_heat;
      s += b.probability * b.entropy_production;
    }
    t.summary = {{"mean_work", w * scale}, {"mean_quantum_heat", q * scale}, {"mean_entropy_production", s}};
    return t;
  }
  t.columns = {"quantity", "mean", "std_error", "n"};
  const std::size_t n = config.samples;
  std::vector<double> work(n), heat(n), entropy(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RandomStream stream(config.seed, i);
    const auto ledgers = sample_quantum_trajectory(p.initial, p.segments, p.omega0, stream);
    for (const auto& l : ledgers) {
      work[i] += l.work;
      heat[i] += l.quantum_heat;
      entropy[i] += l.entropy_production;
    }
  });
  const std::array<std::pair<const char*, const std::vector<double>*>, 3> series = {
      {{"work", &work}, {"quantum_heat", &heat}, {"entropy_production", &entropy}}};
  for (const auto& [name, values] : series) {
    const auto r = summarize_samples(*values, 0);
    const double unit = std::string_view(name) == "entropy_production" ? 1.0 : scale;
    t.rows.push_back({std::string(name), r.mean * unit, r.std_error * unit, static_cast<std::int64_t>(r.n_samples)});
  }
  return t;
}

std::vector<std::string> engine_columns() {
  return {"omega_tau", "p_minus", "W", "Qq", "WL", "eta", "power", "W_halfangle"};
}

std::vector<Cell> engine_row(double omega_tau, double p_minus, double w, double q, double wl, double eta, double power,
                             double half, double scale) {
  return {omega_tau, p_minus, w * scale, q * scale, wl * scale, eta, power * scale, half * scale};
}

ResultTable run_engine_table(const ExperimentConfig& config, const EngineParams& p, unsigned workers) {
  ResultTable t;
  t.columns = engine_columns();
  const double scale = config.si ? units::kHbar : 1.0;
  const auto& c = p.config;
  const double angle = c.rotation_angle();
  const EnginePerformance perf = config.exact ? exact_engine_performance(c) : run_engine(c, workers);
  t.rows.push_back(engine_row(angle, perf.outcome_minus_fraction, perf.mean_work, perf.mean_quantum_heat,
                              perf.mean_landauer, perf.eta, perf.power, c.omega0 * std::sin(0.5 * angle), scale));
  if (!config.exact) {
    t.columns.push_back("p_minus_std_error");
    t.columns.push_back("n");
    t.rows.back().push_back(perf.outcome_minus_std_error);
    t.rows.back().push_back(static_cast<std::int64_t>(perf.n_cycles));
  }
  t.summary = {{"energy_unit", config.si ? "J" : "hbar=1"}, {"mode", config.exact ? "exact" : "monte-carlo"}};
  return t;
}

ResultTable run_zeno(const ExperimentConfig& config, const ZenoParams& p, unsigned workers) {
  ResultTable t;
  t.columns = engine_columns();
  const double scale = config.si ? units::kHbar : 1.0;
  const auto sweep = zeno_sweep(p.config, p.grid, workers);
  std::size_t best_eta = 0;
  std::size_t best_power = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& z = sweep[i];
    t.rows.push_back(engine_row(z.omega_tau, z.p_minus, z.work, z.quantum_heat, z.landauer, z.eta, z.power,
                                z.work_half_angle, scale));
    if (z.eta > sweep[best_eta].eta) best_eta = i;
    if (z.power > sweep[best_power].power) best_power = i;
  }
  t.summary = {{"argmax_eta_omega_tau", sweep[best_eta].omega_tau},
               {"argmax_power_omega_tau", sweep[best_power].omega_tau},
               {"energy_unit", config.si ? "J" : "hbar=1"}};
  return t;
}

ResultTable run_gate(const GateParams& p, unsigned workers) {
  ResultTable t;
  t.columns = {"nbar", "fidelity", "infidelity", "energy_J", "ratio_to_landauer_300K", "n_max", "pulse_time"};
  const double landauer = landauer_cost(0.5, 300.0, units::UnitSystem::si);
  GateOptions options;
  options.field_frequency_hz = p.frequency_hz;
  options.calibration = p.calibration;
  options.workers = workers;
  for (double n : p.photons) {
    const auto g = gate_fidelity(p.theta, n, p.coupling, options);
    t.rows.push_back({n, g.fidelity, 1.0 - g.fidelity, g.energy_joules, g.energy_joules / landauer,
                      static_cast<std::int64_t>(g.n_max), g.pulse_time});
  }
  t.summary = {{"landauer_300K_J", landauer}};
  if (p.threshold) {
    const auto n_star = min_photons_for_fidelity(*p.threshold, p.coupling, p.theta, workers);
    t.summary["threshold"] = *p.threshold;
    t.summary["min_photons"] = n_star;
    t.summary["min_photons_energy_J"] = gate_energy_cost(static_cast<double>(n_star), p.frequency_hz);
  }
  return t;
}

ResultTable run_verify(const ExperimentConfig& config, unsigned workers) {
  ResultTable t;
  t.columns = {"criterion", "status", "name", "detail"};
  std::int64_t passed = 0;
  for (const auto& r : run_acceptance(config.seed, workers)) {
    t.rows.push_back({static_cast<std::int64_t>(r.id), std::string(r.passed ? "pass" : "fail"), r.name, r.detail});
    passed += r.passed ? 1 : 0;
    t.acceptance_failed = t.acceptance_failed || !r.passed;
  }
  t.summary = {{"passed", passed}, {"total", static_cast<std::int64_t>(t.rows.size())}};
  return t;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentConfig parse_config(const nlohmann::json& document) {
  std::vector<std::string> problems;
  FieldReader top(document, "", problems);
  if (!top.ok()) throw ConfigError(std::move(problems));
  top.only({"kind", "seed", "samples", "exact", "si", "output", "params", "description"});

  ExperimentConfig config;
  config.canonical = document.dump();
  const auto kind = top.choice("kind", std::nullopt, {"ift", "jarzynski", "gift", "demon", "quantum", "engine",
                                                       "zeno-sweep", "gate-cost", "verify"});
  if (kind) {
    for (const auto& [k, name] : kKinds) {
      if (name == *kind) config.kind = k;
    }
  }
  if (auto v = top.count("seed", 0)) config.seed = *v;
  if (auto v = top.count("samples", 100'000)) {
    config.samples = *v;
    if (*v == 0) top.report("samples", "must be at least 1");
  }
  if (auto v = top.flag("exact", false)) config.exact = *v;
  if (auto v = top.flag("si", false)) config.si = *v;
  if (top.has("output")) {
    FieldReader out(document.at("output"), "output", problems);
    out.only({"path", "format"});
    config.output_path = out.text("path");
    if (config.output_path && config.output_path->empty()) out.report("path", "must not be empty");
    if (auto f = out.choice("format", "csv", {"csv", "json"})) {
      config.format = *f == "json" ? OutputFormat::json : OutputFormat::csv;
    }
  }

  const nlohmann::json empty = nlohmann::json::object();
  const nlohmann::json& params = top.has("params") ? document.at("params") : empty;
  if (kind && *kind != "verify" && !top.has("params")) top.report("params", "is required");
  if (kind && (!top.has("params") || params.is_object())) {
    FieldReader r(params, "params", problems);
    switch (config.kind) {
      case ExperimentKind::ift:
      case ExperimentKind::jarzynski: {
        if (config.samples < 100 && !config.exact) top.report("samples", "must be at least 100 for estimators");
        if (auto doc = parse_protocol(params, problems, "params")) config.params = ProtocolParams{std::move(*doc)};
        break;
      }
      case ExperimentKind::gift:
        config.params = parse_gift(r);
        break;
      case ExperimentKind::demon:
        config.params = parse_demon(r, config.si);
        break;
      case ExperimentKind::quantum:
        config.params = parse_quantum(r, problems);
        break;
      case ExperimentKind::engine:
        config.params = parse_engine(r, config.si, config.samples, config.seed, problems);
        break;
      case ExperimentKind::zeno_sweep:
        config.params = parse_zeno(r, config.si);
        break;
      case ExperimentKind::gate_cost:
        config.params = parse_gate(r);
        break;
      case ExperimentKind::verify:
        r.only({});
        config.params = VerifyParams{};
        break;
    }
  } else if (top.has("params")) {
    top.report("params", "must be a JSON object");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return config;
}

ExperimentConfig parse_config_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ResultTable execute(const ExperimentConfig& config, unsigned workers) {
  workers = std::max(1u, workers);
  switch (config.kind) {
    case ExperimentKind::ift:
      return run_ift(config, std::get<ProtocolParams>(config.params), workers);
    case ExperimentKind::jarzynski:
      return run_jarzynski(config, std::get<ProtocolParams>(config.params), workers);
    case ExperimentKind::gift:
      return run_gift(std::get<GiftParams>(config.params));
    case ExperimentKind::demon:
      return run_demon_table(std::get<DemonParams>(config.params));
    case ExperimentKind::quantum:
      return run_quantum(config, std::get<QuantumParams>(config.params), workers);
    case ExperimentKind::engine:
      return run_engine_table(config, std::get<EngineParams>(config.params), workers);
    case ExperimentKind::zeno_sweep:
      return run_zeno(config, std::get<ZenoParams>(config.params), workers);
    case ExperimentKind::gate_cost:
      return run_gate(std::get<GateParams>(config.params), workers);
    case ExperimentKind::verify:
      return run_verify(config, workers);
  }
  throw ConfigError("unknown experiment kind");
}

std::string render(const ResultTable& table, const ExperimentConfig& config, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + cell_text(row[c]);
      out += '\n';
    }
    return out;
  }
  nlohmann::json doc{{"kind", kind_name(config.kind)},
                     {"seed", config.seed},
                     {"si", config.si},
                     {"columns", table.columns},
                     {"rows", nlohmann::json::array()},
                     {"summary", table.summary}};
  for (const auto& row : table.rows) {
    nlohmann::json entry = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) entry[table.columns[c]] = cell_json(row[c]);
    doc["rows"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

RunReport run(const ExperimentConfig& config, unsigned workers) {
  RunReport report;
  const auto start = std::chrono::steady_clock::now();
  try {
    const ResultTable table = execute(config, workers);
    report.rendered = render(table, config, config.format);
    if (table.acceptance_failed) {
      report.exit_code = exit_code::acceptance;
      report.message = "acceptance checks failed";
    }
    if (config.output_path) {
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_file(*config.output_path, report.rendered);
      nlohmann::json manifest{{"tool", "qthermo"},
                              {"tool_version", kToolVersion},
                              {"kind", kind_name(config.kind)},
                              {"config", nlohmann::json::parse(config.canonical)},
                              {"config_sha256", sha256_hex(config.canonical)},
                              {"seed", config.seed},
                              {"workers", std::max(1u, workers)},
                              {"result_file", *config.output_path},
                              {"result_format", config.format == OutputFormat::csv ? "csv" : "json"},
                              {"result_sha256", sha256_hex(report.rendered)},
                              {"duration_seconds", seconds},
                              {"timestamp", utc_timestamp()},
                              {"summary", table.summary}};
      const std::string manifest_path = *config.output_path + ".manifest.json";
      write_file(manifest_path, manifest.dump(2) + "\n");
      report.result_path = config.output_path;
      report.manifest_path = manifest_path;
    }
  } catch (const ConfigError& e) {
    report.exit_code = exit_code::validation;
    report.message = e.what();
  } catch (const CapacityError& e) {
    report.exit_code = exit_code::capacity;
    report.message = e.what();
  } catch (const DomainError& e) {
    report.exit_code = exit_code::validation;
    report.message = e.what();
  } catch (const DegenerateInputError& e) {
    report.exit_code = exit_code::validation;
    report.message = e.what();
  } catch (const std::exception& e) {
    report.exit_code = exit_code::failure;
    report.message = e.what();
  }
  return report;
}

}  // namespace qthermo
