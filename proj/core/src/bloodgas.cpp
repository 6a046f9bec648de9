#include "hemoswarm/bloodgas.hpp"

#include <cmath>
#include <stdexcept>

namespace hemoswarm {

namespace {
// Handbook van der Waals constants for O2, validated against the
// 1000 atm / 310 K density anchor.
constexpr double vdw_a = 0.1382;     // Pa m^6 / mol^2
constexpr double vdw_b = 3.186e-5;   // m^3 / mol
}  // namespace

double saturation(const HillCurve& curve, double c) {
  if (c <= 0.0) return 0.0;
  const double a = c / curve.c_half;
  const double an = std::pow(a, curve.exponent);
  return an / (1.0 + an);
}

double saturation_slope(const HillCurve& curve, double c) {
  if (c <= 0.0) return 0.0;
  const double a = c / curve.c_half;
  const double an1 = std::pow(a, curve.exponent - 1.0);
  const double an = an1 * a;
  const double denom = 1.0 + an;
  return (curve.exponent / curve.c_half) * an1 / (denom * denom);
}

double vdw_density(double pressure, double temperature) {
  if (pressure <= 0.0) throw std::invalid_argument("pressure must be positive");
  if (temperature <= 0.0)
    throw std::invalid_argument("temperature must be positive");

  const double rt = units::gas_constant * temperature;
  // Molar-density residual of (P + a n^2)(1/n - b) = RT. Positive at n -> 0,
  // negative as n -> 1/b, with a single crossing above the critical point.
  const auto residual = [&](double n) {
    return (pressure + vdw_a * n * n) * (1.0 / n - vdw_b) - rt;
  };

  double lo = 1e-12;
  double hi = (1.0 / vdw_b) * (1.0 - 1e-12);
  double flo = residual(lo);
  double fhi = residual(hi);
  if (!(flo > 0.0) || !(fhi < 0.0))
    throw std::runtime_error("vdw_density: no root in physical bracket");

  // Bisection with a secant refinement; the residual is cheap and smooth.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = residual(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    if ((hi - lo) <= 1e-14 * hi) break;
  }
  double n = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double f0 = residual(n);
    const double h = n * 1e-7;
    const double d = (residual(n + h) - f0) / h;
    if (d == 0.0) break;
    const double next = n - f0 / d;
    if (next <= lo || next >= hi) break;
    if (std::abs(next - n) <= 1e-15 * n) {
      n = next;
      break;
    }
    n = next;
  }
  return n * units::avogadro;
}

GasState vdw_state(double pressure, double temperature) {
  return GasState{pressure, temperature, vdw_density(pressure, temperature)};
}

}  // namespace hemoswarm
