#pragma once

/**
 * @file storage.hpp
 * @brief Oxygen-storage engineering: pressure-tank capacity, pump coverage,
 *        fill times, the transport-robot design optimizer and reservoir
 *        sizing.
 *
 * Tank accounting: storage_fraction f is the exterior tank-volume fraction
 * of the robot; the tank (outer) radius is f^(1/3) r and the gas-filled
 * interior radius is f^(1/3) r - t.
 */

#include <optional>

#include "hemoswarm/bloodgas.hpp"
#include "hemoswarm/params.hpp"

namespace hemoswarm {

struct TankDesign {
  double robot_radius = 1e-6;       // m
  double storage_fraction = 0.8;    // exterior tank volume / robot volume
  double wall_thickness = 20e-9;    // m, floor one atomic layer (1 nm)
  double wall_strength = 1e10;      // Pa
  double fill_pressure_ratio = 1.0 / 3.0;  // of the Laplace maximum

  void validate() const;
  double tank_radius() const;      // outer shell radius
  double interior_radius() const;  // gas volume radius
};

/// Laplace's law for a thin-walled sphere, 2 t sigma / r. Rejects t >= r.
double max_tank_pressure(double wall_thickness, double wall_strength,
                         double tank_radius);

struct PumpFraction {
  double fraction;   // clamped to [floor, ceiling]
  double raw;        // D c / (J_max r)
  bool infeasible;   // raw > ceiling: molecules arrive faster than pumps collect
};

/// Minimum robot-surface fraction of pumps needed to capture the
/// diffusion-limited arrival in lung capillaries, clamped to the practical
/// [floor, ceiling] band.
PumpFraction pump_surface_fraction(double robot_radius, double c,
                                   const RobotSpec& robots,
                                   const PhysiologyParams& phys,
                                   double floor = 0.05, double ceiling = 1.0);

/// Molecules stored at fill_pressure_ratio of the maximum pressure, with the
/// interior volume net of the shell. Throws when the shell consumes the tank.
double tank_capacity(const TankDesign& design, const PhysiologyParams& phys);

/// Time to collect `capacity` molecules at the diffusion-limited rate in a
/// lung capillary, with pumping overhead consuming part of the intake.
double fill_time(double capacity, double robot_radius, double c_lung,
                 const PhysiologyParams& phys, double pump_overhead = 0.03);

/// Average power a store of `capacity` molecules sustains for `duration`.
double stored_power(double capacity, double duration, const RobotSpec& robots,
                    const PhysiologyParams& phys);

/// Molecules required to sustain `power` for `duration`.
double molecules_for_power(double power, double duration, const RobotSpec& robots,
                           const PhysiologyParams& phys);

/// Design targets and constraint constants for oxygen-transport robots.
struct TransportRequirements {
  double main_power = 100e-12;       // W carried per main robot, over one loop
  double min_average_power = 1e-12;  // W the tank must sustain over one loop
  double own_power = 0.1e-12;        // W of onboard computation while circulating
  double lung_transit = 0.75;        // s available to fill in one pass
  double main_robot_radius = 1e-6;   // m
  double wall_thickness_at_main = 20e-9;  // m, scaled as t = 20 nm (r / 1 um)
  double min_wall_thickness = 1e-9;  // m, single-atomic-layer floor
};

struct TransportFeasibility {
  bool fill_ok = false;
  bool volume_ok = false;
  bool energy_ok = false;
  double fill_time_s = 0.0;
  double capacity = 0.0;
  double deliverable = 0.0;    // capacity net of own use over one loop
  double pump_fraction = 0.0;
  double wall_thickness = 0.0;
  bool feasible() const { return fill_ok && volume_ok && energy_ok; }
};

/// Evaluates the three design constraints at one (radius, storage
/// fraction) point: single-transit fill, component volume, onboard energy.
TransportFeasibility transport_feasibility(double radius, double storage_fraction,
                                           const TransportRequirements& req,
                                           const RobotSpec& robots,
                                           const PhysiologyParams& phys);

struct TransportDesign {
  double radius = 0.0;
  double storage_fraction = 0.0;
  double pump_fraction = 0.0;
  double tank_capacity = 0.0;
  double deliverable = 0.0;
  double fill_time = 0.0;
  double count_ratio = 0.0;            // transport robots per main robot
  double total_volume_ratio = 0.0;     // vs one main robot volume
  double production_volume_ratio = 0.0;  // (1-f) * total volume ratio
  TransportFeasibility flags;
};

struct TransportGridSpec {
  double r_min = 0.05e-6;
  double r_max = 1e-6;
  double f_min = 0.01;
  double f_max = 0.95;
  int r_points = 96;
  int f_points = 95;
  int refine_rounds = 3;
  int refine_points = 41;
};

/// Exhaustive grid search with local refinement, minimizing the total
/// transport-robot volume per main robot. Deterministic; ties broken toward
/// smaller radius, then smaller storage fraction. Empty optional when no
/// feasible design exists.
std::optional<TransportDesign> optimize_transport(const TransportRequirements& req,
                                                  const TransportGridSpec& grid,
                                                  const RobotSpec& robots,
                                                  const PhysiologyParams& phys);

struct ReservoirDemand {
  double robots = 1e12;        // main robots supplied
  double power = 100e-12;      // W per main robot
  double window = 20.0;        // s at the end of the circulation
  double reservoir_own_power = 10e-12;  // W per reservoir robot
};

struct ReservoirReport {
  double supply_rate = 0.0;        // molecule/s
  double initial_stock = 0.0;      // molecules for one circulation
  double per_robot_capacity = 0.0;
  double own_use_fraction = 0.0;   // of stored oxygen over one circulation
  double robot_count = 0.0;
  double fill_time_s = 0.0;        // in a lung capillary
  double circulations_to_fill = 0.0;  // passive refills at one transit each
};

/// Sizes a vein-wall reservoir built from tank robots that supplies the main
/// swarm during the final `window` seconds of each circulation.
ReservoirReport reservoir_design(const ReservoirDemand& demand,
                                 const TankDesign& tank, const RobotSpec& robots,
                                 const PhysiologyParams& phys);

}  // namespace hemoswarm
