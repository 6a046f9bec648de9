#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario configuration, dispatch and report generation.
 *
 * Scenarios are described by a single JSON document with top-level keys
 * `physiology`, `robots`, `policy`, `scenario`, `output` (all optional
 * except `scenario`). Unknown keys anywhere are an error. All numbers SI.
 */

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hemoswarm/circuit.hpp"
#include "hemoswarm/params.hpp"
#include "hemoswarm/policies.hpp"
#include "hemoswarm/storage.hpp"
#include "hemoswarm/walldepletion.hpp"

namespace hemoswarm {

/// Configuration problem: unknown key, wrong type, missing field. The
/// message names the offending key. Mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure while running a scenario. Mapped to exit code 3.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind {
  circulating,
  capillary_resident,
  wall_depletion,
  storage_design,
  markov,
};

const char* to_string(ScenarioKind kind);

struct ScenarioConfig {
  std::string id = "scenario";
  ScenarioKind kind = ScenarioKind::circulating;
  PhysiologyParams physiology;
  RobotSpec robots;
  PowerPolicy policy;
  std::optional<std::string> circuit_dataset;  // path; falls back to env/bundled
  std::filesystem::path output_dir = "out";

  // Kind-specific blocks, populated from the `scenario` object.
  VesselCase wall_case;
  MarkovDataModel markov;
  TransportRequirements transport;
  ReservoirDemand reservoir;
};

/// Parses and validates a scenario file. Throws ConfigError.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& json_text);

/// Dataset resolution order: config path, then HEMOSWARM_DATASET, then the
/// bundled dataset.
BranchingDataset resolve_dataset(const ScenarioConfig& config);

struct RunArtifacts {
  std::filesystem::path report;
  std::vector<std::filesystem::path> traces;
};

/// Runs one scenario, writing trace CSVs and report.json under out_dir.
/// Reports are byte-reproducible up to the generated_at timestamp field.
RunArtifacts run_scenario(const ScenarioConfig& config,
                          const std::filesystem::path& out_dir);

struct PowerTableRow {
  double count = 0.0;
  double avg_power = 0.0;
  double min_power = 0.0;
  double dissipation = 0.0;
  bool depleted = false;
};

/// Unlimited-policy power table over robot counts; rows may be computed
/// concurrently (jobs > 1) with a deterministic output order.
std::vector<PowerTableRow> table_power(const std::vector<double>& counts,
                                       const BranchingDataset& dataset,
                                       const PhysiologyParams& phys,
                                       const RobotSpec& robot_design,
                                       int jobs = 1);

/// CSV helpers shared by the CLI and tests.
void write_power_table_csv(const std::vector<PowerTableRow>& rows,
                           const std::filesystem::path& path);

}  // namespace hemoswarm
