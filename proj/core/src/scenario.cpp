#include "hemoswarm/scenario.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "hemoswarm/transport.hpp"
#include "hemoswarm/version.hpp"

namespace hemoswarm {

namespace {
using json = nlohmann::ordered_json;

[[noreturn]] void config_fail(const std::string& message) {
  throw ConfigError(message);
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) config_fail("unknown key '" + where + "." + item.key() + "'");
  }
}

double get_number(const json& obj, const std::string& where, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    config_fail("key '" + where + "." + key + "' must be a number");
  return obj[key].get<double>();
}

void parse_physiology(const json& obj, PhysiologyParams& p) {
  expect_keys(obj, "physiology",
              {"capillary_radius", "tissue_cylinder_radius", "overall_hematocrit",
               "blood_volume", "circulation_time", "tissue_power_max",
               "tissue_half_concentration", "glucose_reaction_energy",
               "hill_p_half", "hill_exponent", "cell_o2_max", "o2_diffusion",
               "o2_lung_concentration", "henry_ratio"});
  p.capillary_radius = get_number(obj, "physiology", "capillary_radius", p.capillary_radius);
  p.tissue_cylinder_radius =
      get_number(obj, "physiology", "tissue_cylinder_radius", p.tissue_cylinder_radius);
  p.overall_hematocrit =
      get_number(obj, "physiology", "overall_hematocrit", p.overall_hematocrit);
  p.blood_volume = get_number(obj, "physiology", "blood_volume", p.blood_volume);
  p.circulation_time = get_number(obj, "physiology", "circulation_time", p.circulation_time);
  p.tissue_power_max = get_number(obj, "physiology", "tissue_power_max", p.tissue_power_max);
  p.tissue_half_concentration = get_number(obj, "physiology", "tissue_half_concentration",
                                           p.tissue_half_concentration);
  p.glucose_reaction_energy = get_number(obj, "physiology", "glucose_reaction_energy",
                                         p.glucose_reaction_energy);
  p.hill_p_half = get_number(obj, "physiology", "hill_p_half", p.hill_p_half);
  p.hill_exponent = get_number(obj, "physiology", "hill_exponent", p.hill_exponent);
  p.cell_o2_max = get_number(obj, "physiology", "cell_o2_max", p.cell_o2_max);
  p.o2_diffusion = get_number(obj, "physiology", "o2_diffusion", p.o2_diffusion);
  p.o2_lung_concentration =
      get_number(obj, "physiology", "o2_lung_concentration", p.o2_lung_concentration);
  p.henry_ratio = get_number(obj, "physiology", "henry_ratio", p.henry_ratio);
}

void parse_robots(const json& obj, RobotSpec& r) {
  expect_keys(obj, "robots",
              {"radius", "fuel_cell_efficiency", "count", "pump_max_flux",
               "pump_unit_size", "min_component_volume"});
  r.radius = get_number(obj, "robots", "radius", r.radius);
  r.fuel_cell_efficiency =
      get_number(obj, "robots", "fuel_cell_efficiency", r.fuel_cell_efficiency);
  r.count = get_number(obj, "robots", "count", r.count);
  r.pump_max_flux = get_number(obj, "robots", "pump_max_flux", r.pump_max_flux);
  r.pump_unit_size = get_number(obj, "robots", "pump_unit_size", r.pump_unit_size);
  r.min_component_volume =
      get_number(obj, "robots", "min_component_volume", r.min_component_volume);
}

PowerPolicy::ClassLimit parse_class_limit(const json& value, const std::string& where) {
  PowerPolicy::ClassLimit lim;
  if (value.is_string()) {
    if (value.get<std::string>() != "unlimited")
      config_fail("key '" + where + "' must be \"unlimited\" or an object");
    return lim;
  }
  if (!value.is_object()) config_fail("key '" + where + "' must be \"unlimited\" or an object");
  expect_keys(value, where, {"cap_w", "fraction"});
  if (value.contains("cap_w") && value.contains("fraction"))
    config_fail("key '" + where + "': give either cap_w or fraction, not both");
  if (value.contains("cap_w")) {
    lim.mode = PowerPolicy::ClassLimit::Mode::fixed_cap;
    lim.value = get_number(value, where, "cap_w", 0.0);
  } else if (value.contains("fraction")) {
    lim.mode = PowerPolicy::ClassLimit::Mode::fraction;
    lim.value = get_number(value, where, "fraction", 0.0);
  } else {
    config_fail("key '" + where + "': needs cap_w or fraction");
  }
  return lim;
}

PowerPolicy parse_policy(const json& obj) {
  expect_keys(obj, "policy",
              {"type", "cap_w", "fraction", "artery", "capillary", "vein",
               "active_fraction", "effective_fraction"});
  if (!obj.contains("type")) config_fail("key 'policy.type' is required");
  const std::string type = obj["type"].get<std::string>();
  if (type == "unlimited") return PowerPolicy::unlimited();
  if (type == "fixed_cap")
    return PowerPolicy::fixed_cap(get_number(obj, "policy", "cap_w", -1.0));
  if (type == "fraction")
    return PowerPolicy::fraction(get_number(obj, "policy", "fraction", -1.0));
  if (type == "per_vessel_kind") {
    PowerPolicy::ClassLimit artery, capillary, vein;
    if (obj.contains("artery")) artery = parse_class_limit(obj["artery"], "policy.artery");
    if (obj.contains("capillary"))
      capillary = parse_class_limit(obj["capillary"], "policy.capillary");
    if (obj.contains("vein")) vein = parse_class_limit(obj["vein"], "policy.vein");
    return PowerPolicy::per_vessel_class(artery, capillary, vein);
  }
  if (type == "duty_cycle")
    return PowerPolicy::duty_cycle(get_number(obj, "policy", "active_fraction", -1.0));
  if (type == "history")
    return PowerPolicy::history_effective(
        get_number(obj, "policy", "effective_fraction", -1.0));
  config_fail("key 'policy.type': unknown policy '" + type + "'");
}

ScenarioKind parse_kind(const std::string& kind) {
  if (kind == "circulating") return ScenarioKind::circulating;
  if (kind == "capillary_resident") return ScenarioKind::capillary_resident;
  if (kind == "wall_depletion") return ScenarioKind::wall_depletion;
  if (kind == "storage_design") return ScenarioKind::storage_design;
  if (kind == "markov") return ScenarioKind::markov;
  config_fail("key 'scenario.kind': unknown kind '" + kind + "'");
}

void parse_scenario_block(const json& obj, ScenarioConfig& cfg) {
  expect_keys(obj, "scenario",
              {"kind", "id", "circuit_dataset", "wall", "markov", "transport",
               "reservoir"});
  if (!obj.contains("kind")) config_fail("key 'scenario.kind' is required");
  cfg.kind = parse_kind(obj["kind"].get<std::string>());
  if (obj.contains("id")) cfg.id = obj["id"].get<std::string>();
  if (obj.contains("circuit_dataset"))
    cfg.circuit_dataset = obj["circuit_dataset"].get<std::string>();

  if (obj.contains("wall")) {
    if (cfg.kind != ScenarioKind::wall_depletion)
      config_fail("key 'scenario.wall' only applies to wall_depletion");
    const json& w = obj["wall"];
    expect_keys(w, "scenario.wall",
                {"radius", "length", "mean_speed", "inlet_concentration",
                 "policy", "band", "fraction", "n_r", "n_x"});
    VesselCase& v = cfg.wall_case;
    v.radius = get_number(w, "scenario.wall", "radius", v.radius);
    v.length = get_number(w, "scenario.wall", "length", v.length);
    v.mean_speed = get_number(w, "scenario.wall", "mean_speed", v.mean_speed);
    v.inlet_concentration =
        get_number(w, "scenario.wall", "inlet_concentration", v.inlet_concentration);
    v.band = get_number(w, "scenario.wall", "band", v.band);
    v.fraction = get_number(w, "scenario.wall", "fraction", v.fraction);
    v.n_r = static_cast<int>(get_number(w, "scenario.wall", "n_r", v.n_r));
    v.n_x = static_cast<int>(get_number(w, "scenario.wall", "n_x", v.n_x));
    if (w.contains("policy")) {
      const std::string p = w["policy"].get<std::string>();
      if (p == "full") v.policy = WallPolicy::full;
      else if (p == "near_wall_off") v.policy = WallPolicy::near_wall_off;
      else if (p == "uniform_fraction") v.policy = WallPolicy::uniform_fraction;
      else config_fail("key 'scenario.wall.policy': unknown policy '" + p + "'");
    }
  }
  if (obj.contains("markov")) {
    if (cfg.kind != ScenarioKind::markov)
      config_fail("key 'scenario.markov' only applies to markov");
    const json& m = obj["markov"];
    expect_keys(m, "scenario.markov", {"capacity", "transmit_limit", "p_skin", "p_portal"});
    cfg.markov.capacity =
        static_cast<int>(get_number(m, "scenario.markov", "capacity", cfg.markov.capacity));
    cfg.markov.transmit_limit = static_cast<int>(
        get_number(m, "scenario.markov", "transmit_limit", cfg.markov.transmit_limit));
    cfg.markov.p_skin = get_number(m, "scenario.markov", "p_skin", cfg.markov.p_skin);
    cfg.markov.p_portal = get_number(m, "scenario.markov", "p_portal", cfg.markov.p_portal);
  }
  if (obj.contains("transport")) {
    if (cfg.kind != ScenarioKind::storage_design)
      config_fail("key 'scenario.transport' only applies to storage_design");
    const json& t = obj["transport"];
    expect_keys(t, "scenario.transport",
                {"main_power", "min_average_power", "own_power", "lung_transit"});
    cfg.transport.main_power =
        get_number(t, "scenario.transport", "main_power", cfg.transport.main_power);
    cfg.transport.min_average_power = get_number(t, "scenario.transport", "min_average_power",
                                                 cfg.transport.min_average_power);
    cfg.transport.own_power =
        get_number(t, "scenario.transport", "own_power", cfg.transport.own_power);
    cfg.transport.lung_transit =
        get_number(t, "scenario.transport", "lung_transit", cfg.transport.lung_transit);
  }
  if (obj.contains("reservoir")) {
    if (cfg.kind != ScenarioKind::storage_design)
      config_fail("key 'scenario.reservoir' only applies to storage_design");
    const json& r = obj["reservoir"];
    expect_keys(r, "scenario.reservoir",
                {"robots", "power", "window", "reservoir_own_power"});
    cfg.reservoir.robots = get_number(r, "scenario.reservoir", "robots", cfg.reservoir.robots);
    cfg.reservoir.power = get_number(r, "scenario.reservoir", "power", cfg.reservoir.power);
    cfg.reservoir.window = get_number(r, "scenario.reservoir", "window", cfg.reservoir.window);
    cfg.reservoir.reservoir_own_power = get_number(
        r, "scenario.reservoir", "reservoir_own_power", cfg.reservoir.reservoir_own_power);
  }
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SolverError("cannot write " + path.string());
  os << text;
}

json params_echo(const ScenarioConfig& cfg) {
  json p;
  p["physiology"] = {
      {"capillary_radius", cfg.physiology.capillary_radius},
      {"tissue_cylinder_radius", cfg.physiology.tissue_cylinder_radius},
      {"overall_hematocrit", cfg.physiology.overall_hematocrit},
      {"blood_volume", cfg.physiology.blood_volume},
      {"circulation_time", cfg.physiology.circulation_time},
      {"tissue_power_max", cfg.physiology.tissue_power_max},
      {"tissue_half_concentration", cfg.physiology.tissue_half_concentration},
      {"glucose_reaction_energy", cfg.physiology.glucose_reaction_energy},
      {"hill_p_half", cfg.physiology.hill_p_half},
      {"hill_exponent", cfg.physiology.hill_exponent},
      {"cell_o2_max", cfg.physiology.cell_o2_max},
      {"o2_diffusion", cfg.physiology.o2_diffusion},
      {"o2_lung_concentration", cfg.physiology.o2_lung_concentration},
      {"henry_ratio", cfg.physiology.henry_ratio},
  };
  p["robots"] = {
      {"radius", cfg.robots.radius},
      {"fuel_cell_efficiency", cfg.robots.fuel_cell_efficiency},
      {"count", cfg.robots.count},
      {"pump_max_flux", cfg.robots.pump_max_flux},
      {"pump_unit_size", cfg.robots.pump_unit_size},
      {"min_component_volume", cfg.robots.min_component_volume},
  };
  return p;
}

void write_loop_trace_csv(const LoopTrace& trace, const std::filesystem::path& path) {
  std::ostringstream os;
  os.precision(10);
  os << "t_s,x_m,kind,diameter_m,hematocrit,c_plasma,sat,power_W,power_unlimited_W\n";
  for (const TracePoint& p : trace.points) {
    os << p.t << ',' << p.x << ',' << to_string(p.kind) << ',' << p.diameter << ','
       << p.hematocrit << ',' << p.c_plasma << ',' << p.saturation << ','
       << p.power_w << ',' << p.power_unlimited_w << '\n';
  }
  write_text(path, os.str());
}

void write_wall_traces_csv(const std::vector<WallTrace>& traces,
                           const std::filesystem::path& path) {
  std::ostringstream os;
  os.precision(10);
  os << "x_m,policy,c_wall\n";
  for (const WallTrace& w : traces)
    for (std::size_t i = 0; i < w.x.size(); ++i)
      os << w.x[i] << ',' << to_string(w.policy) << ',' << w.c_wall[i] << '\n';
  write_text(path, os.str());
}
}  // namespace

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::circulating: return "circulating";
    case ScenarioKind::capillary_resident: return "capillary_resident";
    case ScenarioKind::wall_depletion: return "wall_depletion";
    case ScenarioKind::storage_design: return "storage_design";
    case ScenarioKind::markov: return "markov";
  }
  return "?";
}

ScenarioConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const std::exception& e) {
    config_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_fail("top level must be a JSON object");
  expect_keys(doc, "$", {"physiology", "robots", "policy", "scenario", "output"});
  if (!doc.contains("scenario")) config_fail("key 'scenario' is required");

  ScenarioConfig cfg;
  if (doc.contains("physiology")) parse_physiology(doc["physiology"], cfg.physiology);
  if (doc.contains("robots")) parse_robots(doc["robots"], cfg.robots);
  if (doc.contains("policy")) cfg.policy = parse_policy(doc["policy"]);
  parse_scenario_block(doc["scenario"], cfg);
  if (doc.contains("output")) {
    expect_keys(doc["output"], "output", {"dir"});
    if (doc["output"].contains("dir"))
      cfg.output_dir = doc["output"]["dir"].get<std::string>();
  }

  try {
    cfg.physiology.validate();
    cfg.robots.validate();
    cfg.policy.validate();
    if (cfg.kind == ScenarioKind::markov) cfg.markov.validate();
    if (cfg.kind == ScenarioKind::wall_depletion) {
      cfg.wall_case.robot_count = cfg.robots.count;
      cfg.wall_case.validate();
    }
  } catch (const std::invalid_argument& e) {
    config_fail(std::string("invalid value: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_fail("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

BranchingDataset resolve_dataset(const ScenarioConfig& config) {
  if (config.circuit_dataset) return load_branching_csv(*config.circuit_dataset);
  if (const char* env = std::getenv("HEMOSWARM_DATASET"))
    return load_branching_csv(env);
  return default_dataset();
}

RunArtifacts run_scenario(const ScenarioConfig& config,
                          const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunArtifacts artifacts;
  json report;
  report["scenario"] = config.id;
  report["kind"] = to_string(config.kind);
  report["tool_version"] = tool_version;
  report["generated_at"] = iso_timestamp();
  report["parameters"] = params_echo(config);

  try {
    switch (config.kind) {
      case ScenarioKind::circulating: {
        const BranchingDataset dataset = resolve_dataset(config);
        const VesselCircuit circuit = build_circuit(dataset, config.physiology);
        const LoopTrace trace =
            integrate_loop(circuit, config.robots, config.policy, config.physiology);
        const auto trace_path = out_dir / "loop_trace.csv";
        write_loop_trace_csv(trace, trace_path);
        artifacts.traces.push_back(trace_path);
        const bool swarm = config.robots.count > 0;
        report["dataset_version"] = circuit.dataset_version;
        report["summary"] = {
            {"avg_power_w", swarm ? trace.summary.avg_power : 0.0},
            {"min_power_w", swarm ? trace.summary.min_power : 0.0},
            {"final_concentration", trace.summary.final_concentration},
            {"final_saturation", trace.summary.final_saturation},
            {"total_dissipation_w", swarm ? trace.summary.total_dissipation : 0.0},
            {"depleted", trace.summary.depleted},
            {"depletion_time_s", trace.summary.depletion_time},
            {"loop_time_s", circuit.total_time},
        };
        const ScenarioMetrics m = scenario_metrics(config.robots, config.physiology);
        report["metrics"] = {
            {"nanocrit", m.nanocrit},
            {"number_density", m.number_density},
            {"spacing_large_vessel_m", m.spacing_large_vessel},
            {"spacing_body_m", m.spacing_body},
        };
        if (m.spacing_capillary)
          report["metrics"]["spacing_capillary_m"] = *m.spacing_capillary;
        break;
      }
      case ScenarioKind::capillary_resident: {
        const CapillaryResidentResult r = integrate_capillary_resident(
            config.robots, config.policy, config.physiology);
        const auto trace_path = out_dir / "capillary_trace.csv";
        write_loop_trace_csv(r.trace, trace_path);
        artifacts.traces.push_back(trace_path);
        report["summary"] = {
            {"avg_power_w", r.trace.summary.avg_power},
            {"min_power_w", r.trace.summary.min_power},
            {"exit_concentration", r.exit_concentration},
            {"mean_heating_w_m3", r.mean_heating_w_m3},
            {"visit_rate_per_s", capillary_visit_rate(config.robots.count, config.physiology)},
        };
        break;
      }
      case ScenarioKind::wall_depletion: {
        std::vector<VesselCase> cases(3, config.wall_case);
        cases[0].policy = WallPolicy::full;
        cases[1].policy = WallPolicy::near_wall_off;
        cases[2].policy = WallPolicy::uniform_fraction;
        for (auto& c : cases) c.robot_count = config.robots.count;
        const auto traces = wall_trace_compare(cases, config.robots, config.physiology);
        const auto trace_path = out_dir / "wall_traces.csv";
        write_wall_traces_csv(traces, trace_path);
        artifacts.traces.push_back(trace_path);
        report["summary"] = {
            {"peclet", peclet_number(config.wall_case.mean_speed,
                                     2.0 * config.wall_case.radius, config.physiology)},
            {"outlet_wall_full", traces[0].c_wall.back()},
            {"outlet_wall_near_wall_off", traces[1].c_wall.back()},
            {"outlet_wall_uniform_fraction", traces[2].c_wall.back()},
        };
        break;
      }
      case ScenarioKind::storage_design: {
        const auto design = optimize_transport(config.transport, TransportGridSpec{},
                                               config.robots, config.physiology);
        if (!design) {
          report["summary"] = {{"feasible", false}};
        } else {
          report["summary"] = {
              {"feasible", true},
              {"radius_m", design->radius},
              {"storage_fraction", design->storage_fraction},
              {"pump_fraction", design->pump_fraction},
              {"tank_capacity", design->tank_capacity},
              {"deliverable", design->deliverable},
              {"fill_time_s", design->fill_time},
              {"count_ratio", design->count_ratio},
              {"total_volume_ratio", design->total_volume_ratio},
              {"production_volume_ratio", design->production_volume_ratio},
              {"fill_ok", design->flags.fill_ok},
              {"volume_ok", design->flags.volume_ok},
              {"energy_ok", design->flags.energy_ok},
          };
        }
        TankDesign tank;  // reservoir example: 1 um robots, 80% tanks, 20 nm walls
        const ReservoirReport rr =
            reservoir_design(config.reservoir, tank, config.robots, config.physiology);
        report["reservoir"] = {
            {"supply_rate", rr.supply_rate},
            {"initial_stock", rr.initial_stock},
            {"per_robot_capacity", rr.per_robot_capacity},
            {"own_use_fraction", rr.own_use_fraction},
            {"robot_count", rr.robot_count},
            {"fill_time_s", rr.fill_time_s},
            {"circulations_to_fill", rr.circulations_to_fill},
        };
        break;
      }
      case ScenarioKind::markov: {
        const MarkovResult r = markov_stationary(config.markov);
        report["summary"] = {
            {"stationary", r.stationary},
            {"full_probability", r.full_probability},
            {"transmit_ready_probability", r.transmit_ready_probability},
            {"effective_active_fraction", effective_active_fraction(r)},
            {"residual", r.residual},
        };
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::exception& e) {
    throw SolverError(e.what());
  }

  artifacts.report = out_dir / "report.json";
  write_text(artifacts.report, report.dump(2) + "\n");
  return artifacts;
}

std::vector<PowerTableRow> table_power(const std::vector<double>& counts,
                                       const BranchingDataset& dataset,
                                       const PhysiologyParams& phys,
                                       const RobotSpec& robot_design, int jobs) {
  if (counts.empty()) throw std::invalid_argument("counts must be nonempty");
  const VesselCircuit circuit = build_circuit(dataset, phys);

  auto run_row = [&](double count) {
    PowerTableRow row;
    row.count = count;
    if (count <= 0.0) return row;  // no robots: power columns are zero
    RobotSpec robots = robot_design;
    robots.count = count;
    const LoopTrace trace =
        integrate_loop(circuit, robots, PowerPolicy::unlimited(), phys);
    row.avg_power = trace.summary.avg_power;
    row.min_power = trace.summary.min_power;
    row.dissipation = trace.summary.total_dissipation;
    row.depleted = trace.summary.depleted;
    return row;
  };

  std::vector<PowerTableRow> rows(counts.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < counts.size(); ++i) rows[i] = run_row(counts[i]);
  } else {
    std::vector<std::future<PowerTableRow>> futures;
    futures.reserve(counts.size());
    for (double c : counts)
      futures.push_back(std::async(std::launch::async, run_row, c));
    for (std::size_t i = 0; i < futures.size(); ++i) rows[i] = futures[i].get();
  }
  return rows;
}

void write_power_table_csv(const std::vector<PowerTableRow>& rows,
                           const std::filesystem::path& path) {
  std::ostringstream os;
  os.precision(10);
  os << "count,avg_power_W,min_power_W,dissipation_W,depleted\n";
  for (const PowerTableRow& r : rows)
    os << r.count << ',' << r.avg_power << ',' << r.min_power << ','
       << r.dissipation << ',' << (r.depleted ? 1 : 0) << '\n';
  write_text(path, os.str());
}

}  // namespace hemoswarm
