#pragma once

/**
 * @file transport.hpp
 * @brief Plasma oxygen and robot power along a circulation loop, integrated
 *        in the frame of a volume moving with the blood cells.
 *
 * The two-compartment exchange with equilibrium cell buffering reduces to
 *   dc/dt = (v_cell/v_plasma) * R1 / (1 + B),
 *   B     = [h/(1-h)] * C_max * dS/dc * (v_cell/v_plasma),
 * where R1 is the (negative) robot-plus-tissue sink per unit plasma volume.
 */

#include <cstddef>
#include <vector>

#include "hemoswarm/bloodgas.hpp"
#include "hemoswarm/circuit.hpp"
#include "hemoswarm/policies.hpp"

namespace hemoswarm {

/// Diffusion-limited absorption of an isolated sphere, 4 pi D r c [molecule/s].
double robot_absorption_rate(double c, double robot_radius, double diffusion);

/// Power from glucose oxidation at the given oxygen uptake,
/// f_robot (E_glucose/6) rate [W].
double robot_power(double absorption_rate, const RobotSpec& robots,
                   const PhysiologyParams& phys);

/// First-order robot sink coefficient k with R_robot = k c, per unit plasma
/// volume: k = 4 pi D r n_density / (1 - h).
double robot_sink_coefficient(const RobotSpec& robots, double hematocrit,
                              const PhysiologyParams& phys);

/// R_robot = k c [molecule/(m^3 plasma s)].
double robot_sink_rate(double c, const RobotSpec& robots, double hematocrit,
                       const PhysiologyParams& phys);

/// Tissue sink per unit plasma volume inside the body capillary:
/// [P_tissue(c)/(E/6)] * [(r_t/r_c)^2 - 1] / (1-h) with the capillary
/// hematocrit derived from the capillary diameter.
double tissue_sink_rate(double c, const PhysiologyParams& phys);

/// Michaelis-Menten tissue power density P_max c/(K+c) [W/m^3 tissue].
double tissue_power_density(double c, const PhysiologyParams& phys);

/// Convection/diffusion ratio v d / D; reporting diagnostic.
double peclet_number(double speed, double distance, const PhysiologyParams& phys);

struct TracePoint {
  double t;            // s, moving-volume clock
  double x;            // m from loop start
  SegmentKind kind;
  double diameter;     // m
  double hematocrit;
  double c_plasma;     // molecule/m^3
  double saturation;   // slaved cell saturation
  double power_w;              // policy-limited per-robot power
  double power_unlimited_w;    // diffusion-limited per-robot power
};

struct LoopSummary {
  double avg_power = 0.0;    // time-average of the limited per-robot power
  double min_power = 0.0;    // minimum over the loop
  double final_concentration = 0.0;
  double final_saturation = 0.0;
  double total_dissipation = 0.0;  // avg_power * count / efficiency
  bool depleted = false;           // concentration clamped to zero
  double depletion_time = -1.0;    // s, or -1 when never depleted
};

struct LoopTrace {
  std::vector<TracePoint> points;  // sampling step <= 0.05 s
  LoopSummary summary;
};

/// Integrates one circulation loop starting fully oxygenated at the lung
/// exit. Adaptive embedded Runge-Kutta, relative tolerance 1e-6, absolute
/// 1e14 molecule/m^3, step capped at 10 ms inside the capillary. When the
/// concentration would cross zero it is clamped and power reported as zero
/// for the remainder of the loop.
LoopTrace integrate_loop(const VesselCircuit& circuit, const RobotSpec& robots,
                         const PowerPolicy& policy, const PhysiologyParams& phys);

/// Heating of all robots (full reaction energy), avg_power * count / f_robot.
double total_dissipation(const LoopTrace& trace, const RobotSpec& robots);

struct CapillaryResidentResult {
  LoopTrace trace;               // x over one capillary, t = x / v_cell
  double mean_heating_w_m3;      // robot dissipation per m^3 capillary blood
  double exit_concentration;
};

/// All robots confined to systemic capillaries: the robot number density is
/// 20x the whole-blood value, entry concentration equals the (robot-
/// independent) arterial value, and the tissue sink applies throughout.
CapillaryResidentResult integrate_capillary_resident(const RobotSpec& robots,
                                                     const PowerPolicy& policy,
                                                     const PhysiologyParams& phys);

/// Rate at which circulating robots pass through one given capillary,
/// 1.25 n / (t N) with N ~ 2e10 systemic capillaries.
double capillary_visit_rate(double count, const PhysiologyParams& phys);

}  // namespace hemoswarm
