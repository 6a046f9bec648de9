#pragma once

/**
 * @file walldepletion.hpp
 * @brief Steady axisymmetric advection-diffusion in a straight large vessel
 *        with radially dependent robot consumption policies.
 *
 * Marches downstream in x (axial diffusion neglected at Pe >> 1):
 *   v(rho) d/dx [ c + (h/(1-h)) C_max S(c) ]
 *       = D (1/rho) d/drho (rho dc/drho) - k(rho) c,
 * with Poiseuille v(rho) = 2 v_mean (1 - rho^2/R^2) and zero-flux walls.
 */

#include <cstddef>
#include <string>
#include <vector>

#include "hemoswarm/params.hpp"

namespace hemoswarm {

enum class WallPolicy { full, near_wall_off, uniform_fraction };

const char* to_string(WallPolicy policy);

struct VesselCase {
  double radius = 1e-3;                 // m
  double length = 4e-2;                 // m
  double mean_speed = 2.5e-3;           // m/s
  double inlet_concentration = 0.5e22;  // molecule/m^3
  double robot_count = 1e12;
  WallPolicy policy = WallPolicy::full;
  double band = 0.3e-3;      // m, no-consumption distance from the wall
  double fraction = 0.5;     // uniform consumption fraction
  int n_r = 256;   // resolves the sqrt(D/k) wall layer (~15 um)
  int n_x = 4096;  // resolves the wall-trace front left by the slow wall cells

  void validate() const;
};

struct FieldSolution {
  int n_r = 0;
  int n_x = 0;
  double radius = 0.0;
  double length = 0.0;
  std::vector<double> rho;        // n_r cell centers
  std::vector<double> x;          // n_x + 1 stations including the inlet
  std::vector<double> grid;       // (n_x + 1) rows * n_r, row-major
  std::vector<double> wall_trace; // c near the wall at each station

  double at(int ix, int ir) const { return grid[static_cast<std::size_t>(ix) * n_r + ir]; }
};

/// Solves one case. Throws std::runtime_error when the per-step nonlinear
/// sub-iteration fails to reach 1e-8 relative.
FieldSolution solve_vessel(const VesselCase& vessel, const RobotSpec& robots,
                           const PhysiologyParams& phys);

struct WallTrace {
  WallPolicy policy;
  std::vector<double> x;
  std::vector<double> c_wall;
};

/// Wall traces for several policies on a common grid; all cases must share
/// geometry, inlet and resolution (throws std::invalid_argument otherwise).
std::vector<WallTrace> wall_trace_compare(const std::vector<VesselCase>& cases,
                                          const RobotSpec& robots,
                                          const PhysiologyParams& phys);

/// Little-endian dump: int32 n_r, int32 n_x, then the row-major doubles of
/// `grid` ((n_x+1) * n_r values).
void write_field_binary(const FieldSolution& field, const std::string& path);

}  // namespace hemoswarm
