#include "hemoswarm/walldepletion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hemoswarm/bloodgas.hpp"
#include "hemoswarm/transport.hpp"

namespace hemoswarm {

namespace {
// Thomas algorithm; diagonals are overwritten.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}
}  // namespace

const char* to_string(WallPolicy policy) {
  switch (policy) {
    case WallPolicy::full: return "full";
    case WallPolicy::near_wall_off: return "near_wall_off";
    case WallPolicy::uniform_fraction: return "uniform_fraction";
  }
  return "?";
}

void VesselCase::validate() const {
  if (radius <= 0 || length <= 0 || mean_speed <= 0)
    throw std::invalid_argument("vessel geometry must be positive");
  if (inlet_concentration < 0)
    throw std::invalid_argument("inlet concentration must be nonnegative");
  if (robot_count < 0) throw std::invalid_argument("robot count must be nonnegative");
  if (band <= 0 || band >= radius)
    throw std::invalid_argument("near-wall band must lie in (0, radius)");
  if (fraction < 0 || fraction > 1)
    throw std::invalid_argument("uniform fraction must lie in [0,1]");
  if (n_r < 8 || n_x < 8) throw std::invalid_argument("grid too coarse");
}

FieldSolution solve_vessel(const VesselCase& vessel, const RobotSpec& robots,
                           const PhysiologyParams& phys) {
  vessel.validate();
  const int nr = vessel.n_r;
  const int nx = vessel.n_x;
  const double R = vessel.radius;
  const double dr = R / nr;
  const double dx = vessel.length / nx;
  const double h = phys.overall_hematocrit;
  const double beta = h / (1.0 - h) * phys.cell_o2_max;
  const HillCurve hill = HillCurve::from_params(phys);

  RobotSpec swarm = robots;
  swarm.count = vessel.robot_count;
  const double k_full = robot_sink_coefficient(swarm, h, phys);

  FieldSolution out;
  out.n_r = nr;
  out.n_x = nx;
  out.radius = R;
  out.length = vessel.length;
  out.rho.resize(nr);
  out.x.resize(nx + 1);
  out.grid.assign(static_cast<std::size_t>(nx + 1) * nr, 0.0);
  out.wall_trace.resize(nx + 1);

  std::vector<double> v(nr), k(nr);
  for (int i = 0; i < nr; ++i) {
    const double rho = (i + 0.5) * dr;
    out.rho[i] = rho;
    v[i] = 2.0 * vessel.mean_speed * (1.0 - (rho / R) * (rho / R));
    switch (vessel.policy) {
      case WallPolicy::full: k[i] = k_full; break;
      case WallPolicy::near_wall_off:
        k[i] = (rho >= R - vessel.band) ? 0.0 : k_full;
        break;
      case WallPolicy::uniform_fraction: k[i] = vessel.fraction * k_full; break;
    }
  }

  // Zero radial flux at the wall implies c'(R) = 0; reconstruct the wall
  // value from the last two cell centers with the matching quadratic.
  const auto wall_value = [nr](const std::vector<double>& col) {
    return std::max((9.0 * col[nr - 1] - col[nr - 2]) / 8.0, 0.0);
  };

  std::vector<double> c(nr, vessel.inlet_concentration);
  for (int i = 0; i < nr; ++i) out.grid[i] = c[i];
  out.x[0] = 0.0;
  out.wall_trace[0] = wall_value(c);

  // Radial face coefficients of the finite-volume Laplacian.
  std::vector<double> face(nr - 1);
  for (int i = 0; i + 1 < nr; ++i) face[i] = (i + 1) * dr;

  std::vector<double> lower(nr), diag(nr), upper(nr), rhs(nr), iterate(nr);
  std::vector<double> c_prev;  // station before `c`, once available

  // Downstream march on the buffered content psi(c) = c + beta S(c):
  // backward Euler for the first station, then L-stable BDF2. The nonlinear
  // psi is handled by Picard linearization around the current iterate.
  const auto psi = [&](double cc) {
    const double pos = std::max(cc, 0.0);
    return pos + beta * saturation(hill, pos);
  };

  for (int step = 1; step <= nx; ++step) {
    const bool bdf2 = !c_prev.empty();
    iterate = c;
    bool converged = false;
    for (int sub = 0; sub < 100; ++sub) {
      for (int i = 0; i < nr; ++i) {
        const double sp = saturation_slope(hill, std::max(iterate[i], 0.0));
        const double dpsi = 1.0 + beta * sp;
        double lin, carry;
        if (bdf2) {
          lin = 1.5 * v[i] * dpsi / dx;
          carry = v[i] *
                  (1.5 * psi(iterate[i]) - 2.0 * psi(c[i]) + 0.5 * psi(c_prev[i])) /
                  dx;
        } else {
          lin = v[i] * dpsi / dx;
          carry = v[i] * (psi(iterate[i]) - psi(c[i])) / dx;
        }
        lower[i] = 0.0;
        upper[i] = 0.0;
        diag[i] = lin + k[i];
        rhs[i] = lin * iterate[i] - carry;
        const double inv = phys.o2_diffusion / (out.rho[i] * dr * dr);
        if (i > 0) {
          lower[i] = -inv * face[i - 1];
          diag[i] += inv * face[i - 1];
        }
        if (i + 1 < nr) {
          upper[i] = -inv * face[i];
          diag[i] += inv * face[i];
        }
      }
      solve_tridiagonal(lower, diag, upper, rhs);
      double change = 0.0, scale = 0.0;
      for (int i = 0; i < nr; ++i) {
        change = std::max(change, std::abs(rhs[i] - iterate[i]));
        scale = std::max(scale, std::abs(rhs[i]));
      }
      iterate = rhs;
      if (change <= 1e-8 * std::max(scale, 1.0)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("solve_vessel: buffer sub-iteration did not converge");
    c_prev = c;
    for (int i = 0; i < nr; ++i) c[i] = std::max(iterate[i], 0.0);
    const std::size_t row = static_cast<std::size_t>(step) * nr;
    for (int i = 0; i < nr; ++i) out.grid[row + i] = c[i];
    out.x[step] = step * dx;
    out.wall_trace[step] = wall_value(c);
  }
  return out;
}

std::vector<WallTrace> wall_trace_compare(const std::vector<VesselCase>& cases,
                                          const RobotSpec& robots,
                                          const PhysiologyParams& phys) {
  if (cases.empty()) throw std::invalid_argument("no cases given");
  std::vector<WallTrace> out;
  out.reserve(cases.size());
  for (const VesselCase& vc : cases) {
    const VesselCase& ref = cases.front();
    if (vc.radius != ref.radius || vc.length != ref.length ||
        vc.mean_speed != ref.mean_speed ||
        vc.inlet_concentration != ref.inlet_concentration ||
        vc.n_r != ref.n_r || vc.n_x != ref.n_x)
      throw std::invalid_argument("wall_trace_compare: cases differ in geometry or grid");
    FieldSolution sol = solve_vessel(vc, robots, phys);
    out.push_back(WallTrace{vc.policy, std::move(sol.x), std::move(sol.wall_trace)});
  }
  return out;
}

void write_field_binary(const FieldSolution& field, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  const std::int32_t nr = field.n_r;
  const std::int32_t nx = field.n_x;
  os.write(reinterpret_cast<const char*>(&nr), sizeof(nr));
  os.write(reinterpret_cast<const char*>(&nx), sizeof(nx));
  os.write(reinterpret_cast<const char*>(field.grid.data()),
           static_cast<std::streamsize>(field.grid.size() * sizeof(double)));
  if (!os) throw std::runtime_error("failed writing " + path);
}

}  // namespace hemoswarm
