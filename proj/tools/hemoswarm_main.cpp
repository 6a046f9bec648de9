#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hemoswarm/scenario.hpp"
#include "hemoswarm/version.hpp"

namespace {

std::vector<double> parse_counts(const std::string& spec) {
  std::vector<double> counts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    counts.push_back(std::stod(item));
  }
  if (counts.empty())
    throw hemoswarm::ConfigError("--counts: no counts given");
  return counts;
}

int run_command(const std::string& config_path, const std::string& out_dir,
                int jobs) {
  (void)jobs;  // scenario rows are only parallel inside table-power
  const hemoswarm::ScenarioConfig config = hemoswarm::load_config(config_path);
  const std::filesystem::path out =
      out_dir.empty() ? config.output_dir : std::filesystem::path(out_dir);
  const hemoswarm::RunArtifacts artifacts = hemoswarm::run_scenario(config, out);
  std::cout << "report: " << artifacts.report.string() << "\n";
  for (const auto& t : artifacts.traces) std::cout << "trace: " << t.string() << "\n";
  return 0;
}

int table_power_command(const std::string& counts_spec, const std::string& out_file,
                        double hematocrit, int jobs) {
  hemoswarm::PhysiologyParams phys = hemoswarm::default_params();
  if (hematocrit > 0) phys.overall_hematocrit = hematocrit;
  hemoswarm::BranchingDataset dataset;
  if (const char* env = std::getenv("HEMOSWARM_DATASET"))
    dataset = hemoswarm::load_branching_csv(env);
  else
    dataset = hemoswarm::default_dataset();

  const auto rows = hemoswarm::table_power(parse_counts(counts_spec), dataset, phys,
                                           hemoswarm::RobotSpec{}, jobs);
  std::cout << "count,avg_power_W,min_power_W,dissipation_W,depleted\n";
  std::cout.precision(6);
  for (const auto& r : rows)
    std::cout << r.count << ',' << r.avg_power << ',' << r.min_power << ','
              << r.dissipation << ',' << (r.depleted ? 1 : 0) << "\n";
  if (!out_file.empty()) hemoswarm::write_power_table_csv(rows, out_file);
  return 0;
}

int validate_command(const std::string& config_path) {
  const hemoswarm::ScenarioConfig config = hemoswarm::load_config(config_path);
  std::cout << "ok: " << to_string(config.kind) << " scenario '" << config.id
            << "'\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hemoswarm: circulating-microrobot oxygen and power scenarios"};
  app.set_version_flag("--version", hemoswarm::tool_version);
  app.require_subcommand(1);

  std::string config_path, out_dir, counts_spec, table_out;
  double hematocrit = 0.0;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "Run one scenario config");
  run->add_option("config", config_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides config)");
  run->add_option("--jobs", jobs, "Concurrent workers for table rows");

  CLI::App* table = app.add_subcommand("table-power", "Power table over robot counts");
  table->add_option("--counts", counts_spec, "Comma-separated robot counts")->required();
  table->add_option("--out", table_out, "Also write the table as CSV");
  table->add_option("--hematocrit", hematocrit, "Override the overall hematocrit");
  table->add_option("--jobs", jobs, "Concurrent workers for table rows");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario config");
  validate->add_option("config", config_path, "Scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, out_dir, jobs);
    if (table->parsed()) return table_power_command(counts_spec, table_out, hematocrit, jobs);
    if (validate->parsed()) return validate_command(config_path);
  } catch (const hemoswarm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
