#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qthermo/errors.hpp"
#include "qthermo/runner.hpp"

namespace {

using namespace qthermo;
using nlohmann::json;

const char* kQuench = R"({"states": 2, "initial_energies": [0, 0], "temperature": 1,
                          "steps": [{"drive": [0, 1]}, {"bath": "metropolis"}]})";

json ift_doc() { return {{"kind", "ift"}, {"params", json::parse(kQuench)}}; }

std::vector<std::string> violations_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Config, DefaultsFilled) {
  const auto c = parse_config(ift_doc());
  EXPECT_EQ(c.kind, ExperimentKind::ift);
  EXPECT_EQ(c.samples, 100000u);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_FALSE(c.exact);
  EXPECT_FALSE(c.output_path.has_value());
  EXPECT_EQ(c.format, OutputFormat::csv);
}

TEST(Config, SchemaViolationsAreCollected) {
  auto doc = ift_doc();
  doc["params"]["temperature"] = -2;
  doc["params"]["steps"][1] = json::parse(R"({"bath_matrix": [[0.8, 0.2], [0.1, 0.8]]})");
  doc["colour"] = "blue";
  doc["samples"] = 10;
  const auto v = violations_of(doc);
  EXPECT_GE(v.size(), 4u);
  EXPECT_TRUE(mentions(v, "params.temperature"));
  EXPECT_TRUE(mentions(v, "params.steps[1].bath_matrix"));
  EXPECT_TRUE(mentions(v, "colour"));
  EXPECT_TRUE(mentions(v, "samples"));
}

TEST(Config, UnknownKindAndMalformedText) {
  EXPECT_TRUE(mentions(violations_of({{"kind", "teleport"}}), "kind"));
  EXPECT_THROW(parse_config_text("{not json"), ConfigError);
}

TEST(Config, QuantumSegmentsCompose) {
  const auto c = parse_config(json::parse(R"({"kind": "quantum", "params": {"omega0": 1,
      "segments": [{"rabi": {"omega": 1, "t": 0.5}}, {"rabi": {"omega": 1, "t": 0.5}}, {"measure": "z"},
                   {"measure": [[0.6, 0], [0.8, 0]]}, {"rabi": {"omega": 2, "t": 0.1}}]}})"));
  const auto& q = std::get<QuantumParams>(c.params);
  ASSERT_EQ(q.segments.size(), 3u);
  EXPECT_NEAR(q.segments[0].unitary(1, 0).real(), std::sin(0.5), 1e-15);
  EXPECT_FALSE(q.segments[2].measurement.has_value());
  EXPECT_NEAR(std::abs((*q.segments[1].measurement)[0][1]), 0.8, 1e-15);

  const auto v = violations_of(json::parse(R"({"kind": "quantum", "params": {
      "segments": [{"measure": "y"}, {"rabi": {"omega": 1}}, {"spin": 1}]}})"));
  EXPECT_EQ(v.size(), 3u);
}

TEST(Config, EngineSiTemperature) {
  const auto c = parse_config(json::parse(R"({"kind": "engine", "si": true,
      "params": {"omega0": 1e10, "omega_rabi": 1e9, "tau": 1e-9, "temp": 0.05, "cycles": 10}})"));
  const auto& e = std::get<EngineParams>(c.params).config;
  EXPECT_NEAR(e.memory_temperature, 1.380649e-23 * 0.05 / 1.054571817e-34, 1e-3);
  EXPECT_EQ(e.n_cycles, 10u);
}

TEST(Run, IftMatchesEnumeration) {
  auto doc = ift_doc();
  doc["exact"] = true;
  doc["kind"] = "jarzynski";
  const auto table = execute(parse_config(doc), 1);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_NEAR(std::get<double>(table.rows[0][1]), 0.5 + 0.5 * std::exp(-1.0), 1e-12);
}

TEST(Run, ByteIdenticalAcrossRunsAndWorkers) {
  for (const char* text : {R"({"kind": "ift", "samples": 20000, "seed": 4, "params": )",
                           R"({"kind": "jarzynski", "samples": 20000, "seed": 4, "params": )"}) {
    const auto config = parse_config_text(std::string(text) + kQuench + "}");
    const auto a = run(config, 1);
    const auto b = run(config, 1);
    const auto c = run(config, 3);
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.rendered, b.rendered);
    EXPECT_EQ(a.rendered, c.rendered);
  }
  const auto engine = parse_config(json::parse(R"({"kind": "engine", "samples": 5000, "seed": 2,
      "params": {"tau": 1.0}})"));
  EXPECT_EQ(run(engine, 1).rendered, run(engine, 4).rendered);
}

TEST(Run, WritesResultAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "qthermo_runner_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "gift.json").string();
  auto doc = json::parse(R"({"kind": "gift", "params": {"error_rate": 0.1}, "output": {"format": "json"}})");
  doc["output"]["path"] = path;
  const auto report = run(parse_config(doc), 1);
  ASSERT_EQ(report.exit_code, 0) << report.message;
  const auto result = slurp(path);
  EXPECT_EQ(result, report.rendered);
  const auto manifest = json::parse(slurp(path + ".manifest.json"));
  EXPECT_EQ(manifest["result_sha256"], sha256_hex(result));
  EXPECT_EQ(manifest["kind"], "gift");
  EXPECT_EQ(manifest["config"], doc);
  EXPECT_EQ(manifest["config_sha256"], sha256_hex(doc.dump()));
  const auto rows = json::parse(result)["rows"];
  EXPECT_EQ(rows.size(), 4u);  // y is fixed by (x, m)
  std::filesystem::remove_all(dir);
}

TEST(Run, ExitCodes) {
  const auto big = parse_config(json::parse(R"({"kind": "ift", "exact": true, "params": {"states": 4,
      "initial_energies": [0, 1, 2, 3], "temperature": 1,
      "steps": [{"bath": "metropolis"}, {"bath": "metropolis"}, {"bath": "metropolis"}, {"bath": "metropolis"},
                {"bath": "metropolis"}, {"bath": "metropolis"}, {"bath": "metropolis"}, {"bath": "metropolis"},
                {"bath": "metropolis"}, {"bath": "metropolis"}, {"bath": "metropolis"}, {"bath": "metropolis"}]}})"));
  const auto capacity = run(big, 1);
  EXPECT_EQ(capacity.exit_code, exit_code::capacity);
  EXPECT_NE(capacity.message.find("67108864"), std::string::npos);

  const auto degenerate = parse_config(json::parse(R"({"kind": "demon",
      "params": {"error_rate": 0.5, "feedback": "identity"}})"));
  EXPECT_EQ(run(degenerate, 1).exit_code, exit_code::success);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
