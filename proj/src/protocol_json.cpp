#include "qthermo/protocol_json.hpp"

#include <cmath>

#include "json_fields.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

using detail::FieldReader;

std::optional<ProtocolDocument> parse_protocol(const nlohmann::json& doc,
                                               std::vector<std::string>& problems,
                                               const std::string& path) {
  const std::size_t before = problems.size();
  FieldReader reader(doc, path, problems);
  if (!reader.ok()) return std::nullopt;
  reader.only({"states", "initial_energies", "temperature", "steps", "initial", "description"});

  const auto states = reader.count("states", std::nullopt);
  if (states && *states < 2) reader.report("states", "must be at least 2");
  const auto temperature = reader.number("temperature", std::nullopt, FieldReader::Bound::positive);
  const auto energies = reader.numbers("initial_energies", true);
  const std::size_t n = states.value_or(0);
  if (energies && states && energies->size() != n) {
    reader.report("initial_energies", "has " + std::to_string(energies->size()) +
                                          " entries, expected " + std::to_string(n));
  }

  std::optional<std::vector<double>> initial;
  if (reader.has("initial")) {
    initial = reader.numbers("initial", true);
    if (initial && states && initial->size() != n) {
      reader.report("initial", "has " + std::to_string(initial->size()) + " entries, expected " +
                                   std::to_string(n));
    } else if (initial) {
      double total = 0.0;
      for (double p : *initial) {
        if (p < 0.0 || p > 1.0) reader.report("initial", "probabilities must lie in [0,1]");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        reader.report("initial", "sums to " + nlohmann::json(total).dump() + ", not 1");
      }
    }
  }

  std::vector<ProtocolStep> steps;
  std::optional<EnergyLandscape> current;
  if (energies && states && energies->size() == n && n >= 2) current.emplace(*energies);
  if (!reader.has("steps") || !doc.at("steps").is_array() || doc.at("steps").empty()) {
    reader.report("steps", "must be a non-empty array");
  } else {
    const auto& list = doc.at("steps");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = reader.field_path("steps[" + std::to_string(k) + "]");
      const auto& step = list[k];
      if (!step.is_object() || step.size() != 1) {
        problems.push_back(where + ": must be an object with exactly one of drive|bath|bath_matrix");
        continue;
      }
      const auto& [key, value] = *step.items().begin();
      if (key == "drive") {
        const auto e = reader.as_numbers(value, where + ".drive");
        if (!e) continue;
        if (states && e->size() != n) {
          problems.push_back(where + ".drive: has " + std::to_string(e->size()) +
                             " entries, expected " + std::to_string(n));
          continue;
        }
        if (e->size() < 2) continue;
        current.emplace(*e);
        steps.emplace_back(DriveStep{*current});
      } else if (key == "bath") {
        if (!value.is_string() || value.get<std::string>() != "metropolis") {
          problems.push_back(where + ".bath: only \"metropolis\" is supported");
          continue;
        }
        if (current && temperature) steps.emplace_back(BathStep{metropolis_kernel(*current, *temperature)});
      } else if (key == "bath_matrix") {
        if (!value.is_array() || (states && value.size() != n)) {
          problems.push_back(where + ".bath_matrix: must be a " + std::to_string(n) + "x" +
                             std::to_string(n) + " array");
          continue;
        }
        std::vector<std::vector<double>> rows;
        bool shape_ok = true;
        for (std::size_t r = 0; r < value.size(); ++r) {
          auto row = reader.as_numbers(value[r], where + ".bath_matrix[" + std::to_string(r) + "]");
          if (!row || row->size() != value.size()) {
            if (row) problems.push_back(where + ".bath_matrix: row " + std::to_string(r) + " has wrong length");
            shape_ok = false;
            break;
          }
          rows.push_back(std::move(*row));
        }
        if (!shape_ok) continue;
        const std::size_t before_kernel = problems.size();
        for (std::size_t c = 0; c < rows.size(); ++c) {
          double total = 0.0;
          for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r][c] < 0.0 || rows[r][c] > 1.0) {
              problems.push_back(where + ".bath_matrix: entry (" + std::to_string(r) + "," +
                                 std::to_string(c) + ") outside [0,1]");
            }
            total += rows[r][c];
          }
          if (std::abs(total - 1.0) > 1e-12) {
            problems.push_back(where + ".bath_matrix: column " + std::to_string(c) + " sums to " +
                               nlohmann::json(total).dump() + ", not 1 (kernel must be column-stochastic)");
          }
        }
        if (problems.size() == before_kernel) steps.emplace_back(BathStep{TransitionKernel(rows)});
      } else {
        problems.push_back(where + ": unknown step kind \"" + key + "\"");
      }
    }
  }

  if (problems.size() != before) return std::nullopt;
  try {
    ProtocolDocument out{Protocol(EnergyLandscape(*energies), std::move(steps), *temperature),
                         std::nullopt};
    if (initial) out.initial.emplace(*initial);
    return out;
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) problems.push_back(reader.field_path("protocol") + ": " + v);
    return std::nullopt;
  }
}

ProtocolDocument protocol_from_json(const nlohmann::json& doc) {
  std::vector<std::string> problems;
  auto parsed = parse_protocol(doc, problems);
  if (!parsed) throw ConfigError(std::move(problems));
  return std::move(*parsed);
}

ProtocolDocument protocol_from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return protocol_from_json(doc);
}

nlohmann::json protocol_to_json(const Protocol& protocol) {
  const auto energies = protocol.initial_landscape().energies();
  nlohmann::json doc{{"states", protocol.state_count()},
                     {"initial_energies", std::vector<double>(energies.begin(), energies.end())},
                     {"temperature", protocol.temperature()},
                     {"steps", nlohmann::json::array()}};
  for (const auto& step : protocol.steps()) {
    if (const auto* drive = std::get_if<DriveStep>(&step)) {
      const auto e = drive->landscape.energies();
      doc["steps"].push_back({{"drive", std::vector<double>(e.begin(), e.end())}});
    } else {
      const auto& kernel = std::get<BathStep>(step).kernel;
      std::vector<std::vector<double>> rows(kernel.size(), std::vector<double>(kernel.size()));
      for (std::size_t r = 0; r < kernel.size(); ++r) {
        for (std::size_t c = 0; c < kernel.size(); ++c) rows[r][c] = kernel(r, c);
      }
      doc["steps"].push_back({{"bath_matrix", rows}});
    }
  }
  return doc;
}

}  // namespace qthermo
