#include "hemoswarm/params.hpp"

#include <cmath>
#include <numbers>

namespace hemoswarm {

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace

void PhysiologyParams::validate() const {
  require(capillary_radius > 0, "capillary_radius must be positive");
  require(tissue_cylinder_radius > capillary_radius,
          "tissue_cylinder_radius must exceed capillary_radius");
  require(overall_hematocrit > 0 && overall_hematocrit < 1,
          "overall_hematocrit must lie in (0,1)");
  require(blood_volume > 0, "blood_volume must be positive");
  require(circulation_time > 0, "circulation_time must be positive");
  require(tissue_power_max > 0, "tissue_power_max must be positive");
  require(tissue_half_concentration > 0,
          "tissue_half_concentration must be positive");
  require(glucose_reaction_energy > 0,
          "glucose_reaction_energy must be positive");
  require(hill_p_half > 0, "hill_p_half must be positive");
  require(hill_exponent > 1, "hill_exponent must exceed 1");
  require(cell_o2_max > 0, "cell_o2_max must be positive");
  require(o2_diffusion > 0, "o2_diffusion must be positive");
  require(o2_lung_concentration > 0, "o2_lung_concentration must be positive");
  require(henry_ratio > 0, "henry_ratio must be positive");
}

PhysiologyParams default_params() { return PhysiologyParams{}; }

void RobotSpec::validate() const {
  require(radius > 0, "robot radius must be positive");
  require(fuel_cell_efficiency > 0 && fuel_cell_efficiency <= 1,
          "fuel_cell_efficiency must lie in (0,1]");
  require(count >= 0, "robot count must be nonnegative");
  require(pump_max_flux > 0, "pump_max_flux must be positive");
  require(pump_unit_size > 0, "pump_unit_size must be positive");
  require(min_component_volume > 0, "min_component_volume must be positive");
}

double RobotSpec::volume() const {
  return (4.0 * std::numbers::pi / 3.0) * radius * radius * radius;
}

double RobotSpec::number_density(const PhysiologyParams& phys) const {
  return count / phys.blood_volume;
}

double concentration_to_partial_pressure(double concentration,
                                         const PhysiologyParams& phys) {
  if (concentration < 0)
    throw std::invalid_argument("concentration must be nonnegative");
  return phys.henry_ratio * concentration;
}

double partial_pressure_to_concentration(double pressure,
                                         const PhysiologyParams& phys) {
  if (pressure < 0) throw std::invalid_argument("pressure must be nonnegative");
  return pressure / phys.henry_ratio;
}

ScenarioMetrics scenario_metrics(const RobotSpec& robots,
                                 const PhysiologyParams& phys) {
  ScenarioMetrics m;
  if (robots.count <= 0) return m;
  m.nanocrit = robots.count * robots.volume() / phys.blood_volume;
  m.number_density = robots.count / phys.blood_volume;
  m.spacing_large_vessel = std::cbrt(1.0 / m.number_density);
  m.spacing_body =
      std::cbrt(units::reference_body_volume / robots.count);
  // Spacing along one 8 um capillary; reported only while below the 1 mm
  // maximum capillary length.
  constexpr double capillary_diameter = 8e-6;
  constexpr double max_capillary_length = 1e-3;
  const double per_length = m.number_density * (std::numbers::pi / 4.0) *
                            capillary_diameter * capillary_diameter;
  const double spacing = 1.0 / per_length;
  if (spacing <= max_capillary_length) m.spacing_capillary = spacing;
  return m;
}

}  // namespace hemoswarm
