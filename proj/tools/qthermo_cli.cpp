// qthermo command-line front end. Each subcommand assembles an experiment document and hands it
// to the shared library; `run` takes a complete document from disk.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qthermo/qthermo.h"

namespace {

using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool si = false;
  std::optional<std::uint64_t> samples;
  bool exact = false;
};

std::optional<json> load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << path << ": malformed JSON: " << e.what() << "\n";
    return std::nullopt;
  }
}

// Command-line flags win over the document's own settings.
void apply_globals(json& doc, const GlobalOptions& g) {
  if (!doc.is_object()) return;
  if (g.seed) doc["seed"] = *g.seed;
  if (g.samples) doc["samples"] = *g.samples;
  if (g.exact) doc["exact"] = true;
  if (g.si) doc["si"] = true;
  if (g.out) doc["output"]["path"] = *g.out;
  if (g.format) doc["output"]["format"] = *g.format;
}

int execute(const json& doc, unsigned workers) {
  qt_experiment* experiment = nullptr;
  const std::string text = doc.dump();
  if (qt_experiment_parse(text.c_str(), &experiment) != QT_OK) {
    std::cerr << "error: invalid experiment configuration:\n";
    std::istringstream lines(qt_last_error());
    for (std::string line; std::getline(lines, line);) std::cerr << "  " << line << "\n";
    return kExitValidation;
  }
  qt_run* run = nullptr;
  const qt_status status = qt_experiment_run(experiment, workers, &run);
  qt_experiment_free(experiment);
  if (run == nullptr) {
    std::cerr << "error: " << qt_last_error() << "\n";
    return kExitFailure;
  }
  const int code = qt_run_exit_code(run);
  if (qt_run_result_path(run) != nullptr) {
    std::cerr << "wrote " << qt_run_result_path(run) << " and " << qt_run_manifest_path(run) << "\n";
  } else {
    std::cout << qt_run_output(run);
  }
  if (status != QT_OK) std::cerr << "error (" << qt_status_name(status) << "): " << qt_run_message(run) << "\n";
  qt_run_free(run);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic and quantum thermodynamics experiments"};
  app.set_version_flag("--version", std::string(qt_version()));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed (default 0)");
  app.add_option("--workers", g.workers, "Worker threads; results do not depend on it")
      ->envname("QTHERMO_WORKERS")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Result file; a <out>.manifest.json is written next to it");
  app.add_option("--format", g.format, "Result format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--si", g.si, "Report energies in joules (temperatures in kelvin, frequencies in rad/s)");
  app.add_option("--samples", g.samples, "Monte Carlo sample count (default 100000)");
  app.add_flag("--exact", g.exact, "Use exact enumeration instead of sampling where available");

  json doc;

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run an experiment document");
  run->add_option("config", run_path, "Experiment JSON")->required()->check(CLI::ExistingFile);

  std::string protocol_path;
  auto* ift = app.add_subcommand("ift", "Integral fluctuation theorem estimate");
  ift->add_option("--config", protocol_path, "Protocol JSON")->required()->check(CLI::ExistingFile);
  auto* jarzynski = app.add_subcommand("jarzynski", "Jarzynski equality estimate");
  jarzynski->add_option("--config", protocol_path, "Protocol JSON")->required()->check(CLI::ExistingFile);

  double error_rate = 0.0;
  double bias = 0.5;
  std::string feedback = "reset";
  std::optional<double> temperature;
  auto* gift = app.add_subcommand("gift", "Enumerate the measurement-feedback fluctuation theorem");
  auto* demon = app.add_subcommand("demon", "Information ledger of the error-prone demon");
  for (auto* sub : {gift, demon}) {
    sub->add_option("--error-rate", error_rate, "Measurement error probability")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--bias", bias, "Probability that the system bit is 1")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--feedback", feedback, "Feedback rule")->check(CLI::IsMember({"reset", "identity"}));
  }
  demon->add_option("--temperature", temperature, "Bath temperature");

  std::string quantum_path;
  auto* quantum = app.add_subcommand("quantum", "Quantum trajectories of a driven, measured qubit");
  quantum->add_option("--config", quantum_path, "Quantum parameter JSON")->required()->check(CLI::ExistingFile);

  std::optional<double> omega0, omega_rabi, tau, temp, from, to, theta, coupling, freq_ghz, threshold;
  std::optional<std::uint64_t> points;
  std::vector<double> grid, nbar;
  std::string calibration = "semiclassical";
  auto* engine = app.add_subcommand("engine", "Measurement-fueled qubit engine");
  auto* zeno = app.add_subcommand("zeno-sweep", "Engine efficiency and power over omega_rabi * tau");
  for (auto* sub : {engine, zeno}) {
    sub->add_option("--omega0", omega0, "Qubit frequency");
    sub->add_option("--omega-rabi", omega_rabi, "Rabi frequency");
    sub->add_option("--temp", temp, "Memory temperature");
  }
  engine->add_option("--tau", tau, "Drive duration")->required();
  std::optional<std::uint64_t> cycles;
  engine->add_option("--cycles", cycles, "Engine cycles (default: --samples)");
  zeno->add_option("--grid", grid, "Explicit omega_rabi * tau values")->delimiter(',');
  zeno->add_option("--points", points, "Grid points (default 20)");
  zeno->add_option("--from", from, "Smallest omega_rabi * tau (default 0.01)");
  zeno->add_option("--to", to, "Largest omega_rabi * tau (default pi/2)");

  auto* gate = app.add_subcommand("gate-cost", "Gate fidelity and energy versus photon number");
  gate->add_option("--nbar", nbar, "Mean photon numbers")->delimiter(',');
  gate->add_option("--g", coupling, "Coupling strength");
  gate->add_option("--theta", theta, "Target rotation angle");
  gate->add_option("--freq-ghz", freq_ghz, "Field frequency in GHz");
  gate->add_option("--threshold", threshold, "Report the photon number reaching this fidelity");
  gate->add_option("--calibration", calibration, "Pulse time")->check(CLI::IsMember({"semiclassical", "optimized"}));

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  auto put = [](json& target, const char* key, const auto& value) {
    if (value) target[key] = *value;
  };

  if (run->parsed()) {
    auto loaded = load_json(run_path);
    if (!loaded) return kExitValidation;
    doc = std::move(*loaded);
  } else if (ift->parsed() || jarzynski->parsed()) {
    auto loaded = load_json(protocol_path);
    if (!loaded) return kExitValidation;
    doc = {{"kind", ift->parsed() ? "ift" : "jarzynski"}, {"params", std::move(*loaded)}};
  } else if (gift->parsed() || demon->parsed()) {
    json params{{"error_rate", error_rate}, {"input_bias", bias}, {"feedback", feedback}};
    if (demon->parsed()) put(params, "temperature", temperature);
    doc = {{"kind", gift->parsed() ? "gift" : "demon"}, {"params", params}};
  } else if (quantum->parsed()) {
    auto loaded = load_json(quantum_path);
    if (!loaded) return kExitValidation;
    doc = {{"kind", "quantum"}, {"params", std::move(*loaded)}};
  } else if (engine->parsed() || zeno->parsed()) {
    json params = json::object();
    put(params, "omega0", omega0);
    put(params, "omega_rabi", omega_rabi);
    put(params, "temp", temp);
    if (engine->parsed()) {
      put(params, "tau", tau);
      put(params, "cycles", cycles);
    } else {
      if (!grid.empty()) params["grid"] = grid;
      put(params, "points", points);
      put(params, "from", from);
      put(params, "to", to);
    }
    doc = {{"kind", engine->parsed() ? "engine" : "zeno-sweep"}, {"params", params}};
  } else if (gate->parsed()) {
    json params{{"calibration", calibration}};
    if (!nbar.empty()) params["nbar"] = nbar;
    put(params, "g", coupling);
    put(params, "theta", theta);
    put(params, "freq_ghz", freq_ghz);
    put(params, "threshold", threshold);
    doc = {{"kind", "gate-cost"}, {"params", params}};
  } else if (verify->parsed()) {
    doc = {{"kind", "verify"}};
  }
  apply_globals(doc, g);
  return execute(doc, g.workers);
}
