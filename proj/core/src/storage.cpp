#include "hemoswarm/storage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hemoswarm/transport.hpp"

namespace hemoswarm {

namespace {
constexpr double pi = std::numbers::pi;

double sphere_volume(double r) { return (4.0 * pi / 3.0) * r * r * r; }
}  // namespace

void TankDesign::validate() const {
  if (robot_radius <= 0.0) throw std::invalid_argument("robot_radius must be positive");
  if (storage_fraction <= 0.0 || storage_fraction >= 1.0)
    throw std::invalid_argument("storage_fraction must lie in (0,1)");
  if (wall_thickness < 1e-9)
    throw std::invalid_argument("wall_thickness below the one-atomic-layer floor");
  if (wall_strength <= 0.0) throw std::invalid_argument("wall_strength must be positive");
  if (fill_pressure_ratio <= 0.0 || fill_pressure_ratio > 1.0)
    throw std::invalid_argument("fill_pressure_ratio must lie in (0,1]");
}

double TankDesign::tank_radius() const {
  return std::cbrt(storage_fraction) * robot_radius;
}

double TankDesign::interior_radius() const {
  return tank_radius() - wall_thickness;
}

double max_tank_pressure(double wall_thickness, double wall_strength,
                         double tank_radius) {
  if (tank_radius <= 0.0) throw std::invalid_argument("tank radius must be positive");
  if (wall_thickness <= 0.0)
    throw std::invalid_argument("wall thickness must be positive");
  if (wall_thickness >= tank_radius)
    throw std::invalid_argument("thin-wall regime requires t < tank radius");
  return 2.0 * wall_thickness * wall_strength / tank_radius;
}

PumpFraction pump_surface_fraction(double robot_radius, double c,
                                   const RobotSpec& robots,
                                   const PhysiologyParams& phys, double floor,
                                   double ceiling) {
  if (robot_radius <= 0.0) throw std::invalid_argument("robot radius must be positive");
  const double raw = phys.o2_diffusion * c / (robots.pump_max_flux * robot_radius);
  PumpFraction out;
  out.raw = raw;
  out.fraction = std::clamp(raw, floor, ceiling);
  out.infeasible = raw > ceiling;
  return out;
}

double tank_capacity(const TankDesign& design, const PhysiologyParams& phys) {
  design.validate();
  (void)phys;
  const double r_int = design.interior_radius();
  if (r_int <= 0.0)
    throw std::invalid_argument("tank wall consumes the entire tank volume");
  const double p_max = max_tank_pressure(design.wall_thickness,
                                         design.wall_strength, design.tank_radius());
  const double density =
      vdw_density(design.fill_pressure_ratio * p_max, units::body_temperature);
  return sphere_volume(r_int) * density;
}

double fill_time(double capacity, double robot_radius, double c_lung,
                 const PhysiologyParams& phys, double pump_overhead) {
  if (capacity <= 0.0) throw std::invalid_argument("capacity must be positive");
  if (pump_overhead < 0.0 || pump_overhead >= 1.0)
    throw std::invalid_argument("pump_overhead must lie in [0,1)");
  const double rate =
      (1.0 - pump_overhead) * robot_absorption_rate(c_lung, robot_radius, phys.o2_diffusion);
  return capacity / rate;
}

double stored_power(double capacity, double duration, const RobotSpec& robots,
                    const PhysiologyParams& phys) {
  if (duration <= 0.0) throw std::invalid_argument("duration must be positive");
  return robots.fuel_cell_efficiency * phys.energy_per_o2() * capacity / duration;
}

double molecules_for_power(double power, double duration, const RobotSpec& robots,
                           const PhysiologyParams& phys) {
  return power * duration / (robots.fuel_cell_efficiency * phys.energy_per_o2());
}

TransportFeasibility transport_feasibility(double radius, double storage_fraction,
                                           const TransportRequirements& req,
                                           const RobotSpec& robots,
                                           const PhysiologyParams& phys) {
  if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
  if (storage_fraction <= 0.0 || storage_fraction >= 1.0)
    throw std::invalid_argument("storage fraction must lie in (0,1)");

  TransportFeasibility out;
  out.wall_thickness =
      std::max(req.wall_thickness_at_main * radius / req.main_robot_radius,
               req.min_wall_thickness);

  TankDesign tank;
  tank.robot_radius = radius;
  tank.storage_fraction = storage_fraction;
  tank.wall_thickness = out.wall_thickness;
  if (tank.interior_radius() <= 0.0) return out;  // shell swallows the tank

  out.capacity = tank_capacity(tank, phys);
  const PumpFraction pumps =
      pump_surface_fraction(radius, phys.o2_lung_concentration, robots, phys);
  out.pump_fraction = pumps.fraction;
  out.fill_time_s = fill_time(out.capacity, radius, phys.o2_lung_concentration, phys);
  out.fill_ok = !pumps.infeasible && out.fill_time_s <= req.lung_transit;

  const double available = (1.0 - storage_fraction) * sphere_volume(radius);
  const double components = robots.min_component_volume +
                            4.0 * pi * radius * radius * pumps.fraction *
                                robots.pump_unit_size;
  out.volume_ok = available >= components;

  const double energy_need =
      molecules_for_power(req.min_average_power, phys.circulation_time, robots, phys);
  out.energy_ok = out.capacity >= energy_need;

  const double own_use =
      molecules_for_power(req.own_power, phys.circulation_time, robots, phys);
  out.deliverable = std::max(out.capacity - own_use, 0.0);
  return out;
}

std::optional<TransportDesign> optimize_transport(const TransportRequirements& req,
                                                  const TransportGridSpec& grid,
                                                  const RobotSpec& robots,
                                                  const PhysiologyParams& phys) {
  const double target =
      molecules_for_power(req.main_power, phys.circulation_time, robots, phys);
  const double main_volume = sphere_volume(req.main_robot_radius);

  struct Best {
    double total_volume;
    double r;
    double f;
    TransportFeasibility flags;
  };
  std::optional<Best> best;

  auto consider = [&](double r, double f) {
    const TransportFeasibility flags = transport_feasibility(r, f, req, robots, phys);
    if (!flags.feasible() || flags.deliverable <= 0.0) return;
    const double count = target / flags.deliverable;
    const double total = count * sphere_volume(r);
    if (!best || total < best->total_volume)
      best = Best{total, r, f, flags};
  };

  auto scan = [&](double r_lo, double r_hi, int nr, double f_lo, double f_hi, int nf) {
    r_lo = std::max(r_lo, grid.r_min);
    r_hi = std::min(r_hi, grid.r_max);
    f_lo = std::max(f_lo, grid.f_min);
    f_hi = std::min(f_hi, grid.f_max);
    for (int i = 0; i < nr; ++i) {
      const double r = nr > 1 ? r_lo + (r_hi - r_lo) * i / (nr - 1) : r_lo;
      for (int j = 0; j < nf; ++j) {
        const double f = nf > 1 ? f_lo + (f_hi - f_lo) * j / (nf - 1) : f_lo;
        consider(r, f);
      }
    }
  };

  scan(grid.r_min, grid.r_max, grid.r_points, grid.f_min, grid.f_max, grid.f_points);
  if (!best) return std::nullopt;

  double dr = (grid.r_max - grid.r_min) / (grid.r_points - 1);
  double df = (grid.f_max - grid.f_min) / (grid.f_points - 1);
  for (int round = 0; round < grid.refine_rounds; ++round) {
    scan(best->r - 2.0 * dr, best->r + 2.0 * dr, grid.refine_points,
         best->f - 2.0 * df, best->f + 2.0 * df, grid.refine_points);
    dr = 4.0 * dr / (grid.refine_points - 1);
    df = 4.0 * df / (grid.refine_points - 1);
  }

  TransportDesign d;
  d.radius = best->r;
  d.storage_fraction = best->f;
  d.pump_fraction = best->flags.pump_fraction;
  d.tank_capacity = best->flags.capacity;
  d.deliverable = best->flags.deliverable;
  d.fill_time = best->flags.fill_time_s;
  d.count_ratio = target / best->flags.deliverable;
  d.total_volume_ratio = best->total_volume / main_volume;
  d.production_volume_ratio = (1.0 - best->f) * d.total_volume_ratio;
  d.flags = best->flags;
  return d;
}

ReservoirReport reservoir_design(const ReservoirDemand& demand,
                                 const TankDesign& tank, const RobotSpec& robots,
                                 const PhysiologyParams& phys) {
  if (demand.window <= 0.0 || demand.window > phys.circulation_time)
    throw std::invalid_argument("demand window must lie within one circulation");
  ReservoirReport r;
  const double robots_in_window =
      demand.robots * demand.window / phys.circulation_time;
  r.supply_rate = robots_in_window * demand.power /
                  (robots.fuel_cell_efficiency * phys.energy_per_o2());
  r.initial_stock = r.supply_rate * phys.circulation_time;
  r.per_robot_capacity = tank_capacity(tank, phys);
  const double own_use = molecules_for_power(demand.reservoir_own_power,
                                             phys.circulation_time, robots, phys);
  r.own_use_fraction = own_use / r.per_robot_capacity;
  const double deliverable = r.per_robot_capacity - own_use;
  if (deliverable <= 0.0)
    throw std::invalid_argument("reservoir robot cannot deliver: own use exceeds capacity");
  r.robot_count = demand.robots > 0.0 ? r.initial_stock / deliverable : 0.0;
  r.fill_time_s = fill_time(r.per_robot_capacity, tank.robot_radius,
                            phys.o2_lung_concentration, phys);
  constexpr double lung_transit = 0.75;  // s per passive pass
  r.circulations_to_fill = std::ceil(r.fill_time_s / lung_transit);
  return r;
}

}  // namespace hemoswarm
