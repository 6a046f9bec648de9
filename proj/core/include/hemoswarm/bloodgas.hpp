#pragma once

/**
 * @file bloodgas.hpp
 * @brief Oxygen chemistry kernels: Hill saturation curve and the van der
 *        Waals equation of state for stored oxygen.
 */

#include "hemoswarm/params.hpp"

namespace hemoswarm {

/// Equilibrium hemoglobin saturation curve, parameterized by the plasma
/// concentration at half saturation (P_half / H) and the Hill exponent.
struct HillCurve {
  double c_half;    // molecule/m^3
  double exponent;  // > 1

  static HillCurve from_params(const PhysiologyParams& phys) {
    return HillCurve{phys.hill_p_half / phys.henry_ratio, phys.hill_exponent};
  }
};

/// S(c) = a^n / (1 + a^n) with a = c / c_half. Bounded in [0,1).
double saturation(const HillCurve& curve, double c);

/// dS/dc = (n/c_half) a^(n-1) / (1 + a^n)^2; limit 0 at c = 0 for n > 1.
double saturation_slope(const HillCurve& curve, double c);

/// One consistent (P, T, n) point of the van der Waals equation of state.
struct GasState {
  double pressure;        // Pa
  double temperature;     // K
  double number_density;  // molecule/m^3
};

/// Oxygen number density at the given pressure and temperature from the van
/// der Waals equation of state, solved by bracketed root-finding.
/// Throws std::invalid_argument for non-positive pressure and
/// std::runtime_error when no root exists in the physical bracket.
double vdw_density(double pressure, double temperature = units::body_temperature);

GasState vdw_state(double pressure, double temperature = units::body_temperature);

}  // namespace hemoswarm
