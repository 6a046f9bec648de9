#pragma once

/**
 * @file params.hpp
 * @brief Physical constants, physiological parameters and robot specifications.
 *
 * All quantities are SI internally (m, s, J, W, molecule/m^3). mmHg, atm and
 * liters appear only at I/O boundaries through the conversion constants in
 * hemoswarm::units.
 */

#include <optional>
#include <stdexcept>

namespace hemoswarm {

namespace units {
inline constexpr double pascal_per_atm = 101325.0;
inline constexpr double pascal_per_mmHg = 133.322;
inline constexpr double m3_per_liter = 1e-3;
inline constexpr double avogadro = 6.02214076e23;        // 1/mol
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double gas_constant = 8.314462618;      // J/(mol K)
inline constexpr double body_temperature = 310.0;        // K
inline constexpr double reference_body_volume = 50e-3;   // m^3, spacing reference
}  // namespace units

/// Whole-body physiological and oxygen-chemistry parameters.
struct PhysiologyParams {
  double capillary_radius = 4e-6;            // m
  double tissue_cylinder_radius = 40e-6;     // m
  double overall_hematocrit = 0.45;          // fraction of blood volume
  double blood_volume = 5.4e-3;              // m^3
  double circulation_time = 60.0;            // s
  double tissue_power_max = 4.0e3;           // W/m^3 of tissue
  double tissue_half_concentration = 1e21;   // molecule/m^3
  double glucose_reaction_energy = 4e-18;    // J per glucose molecule
  double hill_p_half = 3500.0;               // Pa
  double hill_exponent = 2.7;
  double cell_o2_max = 1e25;                 // molecule/m^3 of cell
  double o2_diffusion = 2e-9;                // m^2/s
  double o2_lung_concentration = 7e22;       // molecule/m^3 of plasma
  double henry_ratio = 1.6e-19;              // Pa per (molecule/m^3)

  /// Throws std::invalid_argument when any invariant is violated.
  void validate() const;

  double total_flow() const { return blood_volume / circulation_time; }  // m^3/s
  double energy_per_o2() const { return glucose_reaction_energy / 6.0; }
  /// Tissue volume per unit capillary vessel volume, (r_t/r_c)^2 - 1.
  double tissue_volume_ratio() const {
    const double q = tissue_cylinder_radius / capillary_radius;
    return q * q - 1.0;
  }
};

/// Paper-table defaults.
PhysiologyParams default_params();

/// Specification of one robot design plus the deployed count.
struct RobotSpec {
  double radius = 1e-6;                 // m
  double fuel_cell_efficiency = 0.5;    // fraction of reaction energy usable
  double count = 0.0;                   // number deployed (integer-valued)
  double pump_max_flux = 1e22;          // molecule/(m^2 s)
  double pump_unit_size = 10e-9;        // m, per-pump dimension
  double min_component_volume = 1e-19;  // m^3 (0.1 um^3)

  void validate() const;
  double volume() const;                                       // m^3
  double number_density(const PhysiologyParams& phys) const;   // 1/m^3 blood
};

/// Henry's-law partial pressure for a plasma concentration. Rejects c < 0.
double concentration_to_partial_pressure(double concentration,
                                         const PhysiologyParams& phys);

/// Inverse of concentration_to_partial_pressure.
double partial_pressure_to_concentration(double pressure,
                                         const PhysiologyParams& phys);

/// Swarm-scale summary for a robot count: volume fraction, number density and
/// typical spacings. Capillary spacing is absent when it would exceed the
/// 1 mm maximum capillary length.
struct ScenarioMetrics {
  double nanocrit = 0.0;
  double number_density = 0.0;            // 1/m^3 blood
  double spacing_large_vessel = 0.0;      // m
  double spacing_body = 0.0;              // m, referenced to 50 L body volume
  std::optional<double> spacing_capillary;  // m along an 8 um vessel
};

ScenarioMetrics scenario_metrics(const RobotSpec& robots,
                                 const PhysiologyParams& phys);

}  // namespace hemoswarm
