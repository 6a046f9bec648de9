#include "hemoswarm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hemoswarm {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double concentration_floor = 1e14;  // molecule/m^3, absolute tolerance
constexpr double rel_tol = 1e-6;
constexpr double systemic_capillary_count = 2e10;
constexpr double capillary_blood_fraction = 0.05;  // 20x density when resident

struct SegmentModel {
  double h;
  double ratio;        // v_cell / v_plasma
  double k_robot;      // robot sink coefficient at this hematocrit
  bool tissue;
  VesselClass vclass;
  const PhysiologyParams* phys;
  const RobotSpec* robots;
  const PowerPolicy* policy;
  HillCurve hill;

  // dc/dt and the limited per-robot power at concentration c.
  void rates(double c, double& dcdt, double& power, double& power_unlimited) const {
    if (c <= 0.0) {
      dcdt = 0.0;
      power = 0.0;
      power_unlimited = 0.0;
      return;
    }
    power_unlimited =
        robot_power(robot_absorption_rate(c, robots->radius, phys->o2_diffusion),
                    *robots, *phys);
    const double mult = apply_policy(*policy, vclass, c, power_unlimited);
    power = mult * power_unlimited;
    double sink = mult * k_robot * c;
    if (tissue) sink += tissue_sink_rate(c, *phys);
    const double buffer =
        (h / (1.0 - h)) * phys->cell_o2_max * saturation_slope(hill, c) * ratio;
    dcdt = -ratio * sink / (1.0 + buffer);
  }
};

// Cash-Karp embedded Runge-Kutta 4(5) on the state (c, cumulative energy).
struct StepResult {
  double c;
  double energy;
  double error;  // scaled error estimate
};

StepResult rk_step(const SegmentModel& m, double c, double energy, double h_step) {
  static constexpr double b21 = 0.2;
  static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
  static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0,
                          b54 = 35.0 / 27.0;
  static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                          b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                          b65 = 253.0 / 4096.0;
  static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0,
                          c4 = 125.0 / 594.0, c6 = 512.0 / 1771.0;
  static constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                          d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                          d6 = c6 - 0.25;

  double k1c, k1e, pu;
  m.rates(c, k1c, k1e, pu);
  double k2c, k2e;
  m.rates(c + h_step * b21 * k1c, k2c, k2e, pu);
  double k3c, k3e;
  m.rates(c + h_step * (b31 * k1c + b32 * k2c), k3c, k3e, pu);
  double k4c, k4e;
  m.rates(c + h_step * (b41 * k1c + b42 * k2c + b43 * k3c), k4c, k4e, pu);
  double k5c, k5e;
  m.rates(c + h_step * (b51 * k1c + b52 * k2c + b53 * k3c + b54 * k4c), k5c, k5e, pu);
  double k6c, k6e;
  m.rates(c + h_step * (b61 * k1c + b62 * k2c + b63 * k3c + b64 * k4c + b65 * k5c),
          k6c, k6e, pu);

  StepResult out;
  out.c = c + h_step * (c1 * k1c + c3 * k3c + c4 * k4c + c6 * k6c);
  out.energy =
      energy + h_step * (c1 * k1e + c3 * k3e + c4 * k4e + c6 * k6e);
  const double err_c =
      h_step * (d1 * k1c + d3 * k3c + d4 * k4c + d5 * k5c + d6 * k6c);
  const double scale = concentration_floor + rel_tol * std::abs(out.c);
  out.error = std::abs(err_c) / scale;
  return out;
}

struct SegmentIntegration {
  double c_end;
  double energy_end;
  bool depleted;
  double depletion_time;  // within-segment time, valid when depleted
};

// Integrates one segment, appending trace points at every accepted step.
SegmentIntegration integrate_segment(const SegmentModel& m,
                                     const VesselSegment& seg, double t_start,
                                     double x_start, double c0, double energy0,
                                     std::vector<TracePoint>* trace) {
  const double duration = seg.residence_time;
  const double max_step =
      std::min(seg.kind == SegmentKind::capillary ? 0.01 : 0.05, duration);
  double t = 0.0;
  double c = c0;
  double energy = energy0;
  double h_step = max_step;
  bool depleted = false;
  double depletion_time = 0.0;

  auto record = [&](double tt, double cc) {
    if (!trace) return;
    double dcdt, power, pu;
    m.rates(cc, dcdt, power, pu);
    TracePoint p;
    p.t = t_start + tt;
    p.x = x_start + seg.v_cell * tt;
    p.kind = seg.kind;
    p.diameter = seg.diameter;
    p.hematocrit = seg.hematocrit;
    p.c_plasma = cc;
    p.saturation = saturation(m.hill, cc);
    p.power_w = power;
    p.power_unlimited_w = pu;
    trace->push_back(p);
  };

  if (t_start == 0.0) record(0.0, c);

  int rejected_in_row = 0;
  while (t < duration && !depleted) {
    h_step = std::min(h_step, duration - t);
    const StepResult step = rk_step(m, c, energy, h_step);
    if (step.error > 1.0) {
      h_step = std::max(0.2 * h_step,
                        0.9 * h_step * std::pow(step.error, -0.25));
      if (++rejected_in_row > 60)
        throw std::runtime_error("loop integrator failed to converge");
      continue;
    }
    rejected_in_row = 0;
    t += h_step;
    c = step.c;
    energy = step.energy;
    if (c < concentration_floor) {
      c = 0.0;
      depleted = true;
      depletion_time = t;
    }
    record(t, c);
    const double grow = step.error > 0.0
                            ? 0.9 * std::pow(step.error, -0.2)
                            : 5.0;
    h_step = std::min(max_step, h_step * std::clamp(grow, 0.2, 5.0));
  }
  // keep the sampling grid after the concentration clamps to zero
  while (depleted && t < duration) {
    t = std::min(t + 0.05, duration);
    record(t, 0.0);
  }
  return SegmentIntegration{c, energy, depleted, depletion_time};
}
}  // namespace

double robot_absorption_rate(double c, double robot_radius, double diffusion) {
  if (c < 0.0) throw std::invalid_argument("concentration must be nonnegative");
  return 4.0 * pi * diffusion * robot_radius * c;
}

double robot_power(double absorption_rate, const RobotSpec& robots,
                   const PhysiologyParams& phys) {
  if (absorption_rate < 0.0)
    throw std::invalid_argument("absorption rate must be nonnegative");
  return robots.fuel_cell_efficiency * phys.energy_per_o2() * absorption_rate;
}

double robot_sink_coefficient(const RobotSpec& robots, double hematocrit,
                              const PhysiologyParams& phys) {
  if (hematocrit <= 0.0 || hematocrit >= 1.0)
    throw std::invalid_argument("hematocrit out of (0,1)");
  return 4.0 * pi * phys.o2_diffusion * robots.radius *
         robots.number_density(phys) / (1.0 - hematocrit);
}

double robot_sink_rate(double c, const RobotSpec& robots, double hematocrit,
                       const PhysiologyParams& phys) {
  if (c < 0.0) throw std::invalid_argument("concentration must be nonnegative");
  return robot_sink_coefficient(robots, hematocrit, phys) * c;
}

double tissue_power_density(double c, const PhysiologyParams& phys) {
  if (c < 0.0) throw std::invalid_argument("concentration must be nonnegative");
  return phys.tissue_power_max * c / (phys.tissue_half_concentration + c);
}

double tissue_sink_rate(double c, const PhysiologyParams& phys) {
  const double h = hematocrit_in_vessel(2.0 * phys.capillary_radius * 1e6,
                                        phys.overall_hematocrit);
  return tissue_power_density(c, phys) / phys.energy_per_o2() *
         phys.tissue_volume_ratio() / (1.0 - h);
}

double peclet_number(double speed, double distance, const PhysiologyParams& phys) {
  return speed * distance / phys.o2_diffusion;
}

LoopTrace integrate_loop(const VesselCircuit& circuit, const RobotSpec& robots,
                         const PowerPolicy& policy, const PhysiologyParams& phys) {
  robots.validate();
  policy.validate();
  if (circuit.segments.empty())
    throw std::invalid_argument("circuit has no segments");

  LoopTrace trace;
  const HillCurve hill = HillCurve::from_params(phys);
  double c = phys.o2_lung_concentration;
  double energy = 0.0;
  double t = 0.0;
  double x = 0.0;
  bool depleted = false;
  double depletion_time = -1.0;

  for (const VesselSegment& seg : circuit.segments) {
    SegmentModel m;
    m.h = seg.hematocrit;
    m.ratio = seg.v_cell / seg.v_plasma;
    m.k_robot = robot_sink_coefficient(robots, seg.hematocrit, phys);
    m.tissue = seg.tissue_sink;
    m.vclass = seg.vclass;
    m.phys = &phys;
    m.robots = &robots;
    m.policy = &policy;
    m.hill = hill;

    if (depleted) {
      // Concentration stays clamped at zero through the rest of the loop.
      for (double local = 0.0; local < seg.residence_time;) {
        local = std::min(local + 0.05, seg.residence_time);
        TracePoint p{};
        p.t = t + local;
        p.x = x + seg.v_cell * local;
        p.kind = seg.kind;
        p.diameter = seg.diameter;
        p.hematocrit = seg.hematocrit;
        trace.points.push_back(p);
      }
    } else {
      const SegmentIntegration r =
          integrate_segment(m, seg, t, x, c, energy, &trace.points);
      c = r.c_end;
      energy = r.energy_end;
      if (r.depleted && !depleted) {
        depleted = true;
        depletion_time = t + r.depletion_time;
      }
    }
    t += seg.residence_time;
    x += seg.length;
  }

  LoopSummary& s = trace.summary;
  s.avg_power = energy / circuit.total_time;
  s.min_power = trace.points.empty() ? 0.0 : trace.points.front().power_w;
  for (const TracePoint& p : trace.points) s.min_power = std::min(s.min_power, p.power_w);
  s.final_concentration = c;
  s.final_saturation = saturation(hill, c);
  s.depleted = depleted;
  s.depletion_time = depletion_time;
  s.total_dissipation =
      s.avg_power * robots.count / robots.fuel_cell_efficiency;
  return trace;
}

double total_dissipation(const LoopTrace& trace, const RobotSpec& robots) {
  return trace.summary.avg_power * robots.count / robots.fuel_cell_efficiency;
}

CapillaryResidentResult integrate_capillary_resident(const RobotSpec& robots,
                                                     const PowerPolicy& policy,
                                                     const PhysiologyParams& phys) {
  robots.validate();
  policy.validate();
  // Standalone body capillary with the same pinned geometry the circuit uses.
  const double d = 2.0 * phys.capillary_radius;
  const double length = 1e-3;
  const double v_avg = 1e-3;
  const double n_parallel =
      phys.total_flow() / ((pi / 4.0) * d * d * v_avg);
  PhysiologyParams local = phys;
  local.validate();
  const double h = hematocrit_in_vessel(d * 1e6, phys.overall_hematocrit);
  const SegmentSpeeds sp = segment_speeds(d, n_parallel, h, phys);

  VesselSegment seg{};
  seg.kind = SegmentKind::capillary;
  seg.vclass = VesselClass::capillary;
  seg.diameter = d;
  seg.length = length;
  seg.parallel_count = n_parallel;
  seg.hematocrit = h;
  seg.v_avg = sp.v_avg;
  seg.v_plasma = sp.v_plasma;
  seg.v_cell = sp.v_cell;
  seg.fluid_transit_time = length / sp.v_avg;
  seg.residence_time = length / sp.v_cell;
  seg.tissue_sink = true;

  // Robots confined to capillaries holding ~5% of the blood: 20x density.
  RobotSpec resident = robots;
  resident.count = robots.count / capillary_blood_fraction;

  SegmentModel m;
  m.h = h;
  m.ratio = sp.v_cell / sp.v_plasma;
  m.k_robot = robot_sink_coefficient(resident, h, phys);
  m.tissue = true;
  m.vclass = VesselClass::capillary;
  m.phys = &phys;
  m.robots = &resident;
  m.policy = &policy;
  m.hill = HillCurve::from_params(phys);

  CapillaryResidentResult out;
  // Entry concentration: arterial value without robot consumption upstream,
  // independent of the robot count.
  const SegmentIntegration r = integrate_segment(
      m, seg, 0.0, 0.0, phys.o2_lung_concentration, 0.0, &out.trace.points);

  const double n_density_resident = resident.number_density(phys);
  double heat_integral = 0.0;  // trapezoid in x of the robot dissipation density
  for (std::size_t i = 1; i < out.trace.points.size(); ++i) {
    const TracePoint& a = out.trace.points[i - 1];
    const TracePoint& b = out.trace.points[i];
    const double qa = n_density_resident * a.power_w / robots.fuel_cell_efficiency;
    const double qb = n_density_resident * b.power_w / robots.fuel_cell_efficiency;
    heat_integral += 0.5 * (qa + qb) * (b.x - a.x);
  }
  out.mean_heating_w_m3 = heat_integral / length;
  out.exit_concentration = r.c_end;

  LoopSummary& s = out.trace.summary;
  s.avg_power = r.energy_end / seg.residence_time;
  s.min_power = out.trace.points.empty() ? 0.0 : out.trace.points.front().power_w;
  for (const TracePoint& p : out.trace.points)
    s.min_power = std::min(s.min_power, p.power_w);
  s.final_concentration = r.c_end;
  s.final_saturation = saturation(m.hill, r.c_end);
  s.depleted = r.depleted;
  s.depletion_time = r.depleted ? r.depletion_time : -1.0;
  s.total_dissipation = s.avg_power * robots.count / robots.fuel_cell_efficiency;
  return out;
}

double capillary_visit_rate(double count, const PhysiologyParams& phys) {
  if (count < 0.0) throw std::invalid_argument("count must be nonnegative");
  return 1.25 * count / (phys.circulation_time * systemic_capillary_count);
}

}  // namespace hemoswarm
