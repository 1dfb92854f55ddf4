#pragma once

// Config-driven experiment runner behind the CLI.
//
// Document layout:
//   {"kind": "ift" | "jarzynski" | "gift" | "demon" | "quantum" | "engine" | "zeno-sweep" |
//            "gate-cost" | "verify",
//    "seed": 0, "samples": 100000, "exact": false, "si": false,
//    "output": {"path": "result.csv", "format": "csv" | "json"},
//    "params": {...}}
// Unknown fields are rejected and every violation is reported at once.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qthermo/demon.hpp"
#include "qthermo/engine.hpp"
#include "qthermo/gate.hpp"
#include "qthermo/protocol_json.hpp"
#include "qthermo/quantum.hpp"

namespace qthermo {

inline constexpr std::string_view kToolVersion = "1.0.0";

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int failure = 1;
inline constexpr int validation = 2;
inline constexpr int acceptance = 3;
inline constexpr int capacity = 4;
}  // namespace exit_code

enum class ExperimentKind { ift, jarzynski, gift, demon, quantum, engine, zeno_sweep, gate_cost, verify };
enum class OutputFormat { csv, json };

std::string_view kind_name(ExperimentKind kind);

struct ProtocolParams {
  ProtocolDocument document;
};

struct GiftParams {
  double error_rate = 0.0;
  double input_bias = 0.5;
  FeedbackKind feedback = FeedbackKind::reset;
};

struct DemonParams {
  DemonConfig config;
};

struct QuantumParams {
  double omega0 = 1.0;
  PureState initial = PureState::ground();
  std::vector<QuantumSegment> segments;
};

struct EngineParams {
  EngineConfig config;  ///< natural units; SI input is converted on parse
};

struct ZenoParams {
  EngineConfig config;
  std::vector<double> grid;
};

struct GateParams {
  std::vector<double> photons;
  double coupling = 1.0;
  double theta = 0.0;
  double frequency_hz = 6e9;
  std::optional<double> threshold;
  PulseCalibration calibration = PulseCalibration::semiclassical;
};

struct VerifyParams {};

using ExperimentParams = std::variant<ProtocolParams, GiftParams, DemonParams, QuantumParams, EngineParams,
                                      ZenoParams, GateParams, VerifyParams>;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify;
  std::uint64_t seed = 0;
  std::uint64_t samples = 100'000;
  bool exact = false;
  bool si = false;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::csv;
  ExperimentParams params = VerifyParams{};
  /// Compact, key-sorted dump of the input document; hashed into the manifest.
  std::string canonical;
};

/// Throws ConfigError with every violation.
ExperimentConfig parse_config(const nlohmann::json& document);
/// Also reports malformed JSON as a ConfigError.
ExperimentConfig parse_config_text(std::string_view text);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json summary = nlohmann::json::object();
  bool acceptance_failed = false;
};

/// Runs the experiment. Errors propagate as exceptions.
ResultTable execute(const ExperimentConfig& config, unsigned workers);

/// Doubles print with 17 significant digits; non-finite values as inf, -inf or nan.
std::string render(const ResultTable& table, const ExperimentConfig& config, OutputFormat format);

struct RunReport {
  int exit_code = exit_code::success;
  std::string rendered;                    ///< result text, also written to the output path
  std::optional<std::string> result_path;  ///< set when a file was written
  std::optional<std::string> manifest_path;
  std::string message;                     ///< error text for non-zero exits
};

/// execute + render + write result and `<path>.manifest.json`. Maps exceptions to exit codes
/// instead of throwing.
RunReport run(const ExperimentConfig& config, unsigned workers);

std::string sha256_hex(std::string_view data);

}  // namespace qthermo
