#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hemoswarm/transport.hpp"

using namespace hemoswarm;

namespace {
const PhysiologyParams phys = default_params();

RobotSpec swarm(double count) {
  RobotSpec r;
  r.count = count;
  return r;
}

LoopTrace run_loop(double count, const PowerPolicy& policy = PowerPolicy::unlimited(),
                   const PhysiologyParams& p = phys) {
  const VesselCircuit circuit = build_circuit(default_dataset(), p);
  return integrate_loop(circuit, swarm(count), policy, p);
}
}  // namespace

TEST_CASE("single-robot absorption and power anchors") {
  // 1 um robot in lung plasma absorbs 1.8e9 molecules/s
  const double rate = robot_absorption_rate(7e22, 1e-6, phys.o2_diffusion);
  CHECK(rate == doctest::Approx(1.7592918860102842e9).epsilon(1e-12));
  CHECK(robot_absorption_rate(0.0, 1e-6, phys.o2_diffusion) == 0.0);
  // linear in the radius
  CHECK(robot_absorption_rate(7e22, 2e-6, phys.o2_diffusion) ==
        doctest::Approx(2.0 * rate).epsilon(1e-14));

  RobotSpec one;
  CHECK(robot_power(1.76e9, one, phys) == doctest::Approx(5.866666666666667e-10).epsilon(1e-12));
  CHECK(robot_power(0.0, one, phys) == 0.0);
  // 1.8e10 molecules spread over one circulation gives 100 pW
  CHECK(robot_power(1.8e10 / 60.0, one, phys) == doctest::Approx(1e-10).epsilon(1e-12));
}

TEST_CASE("robot sink coefficient anchors") {
  // 1e10 robots: time constant about 11 s
  const double k10 = robot_sink_coefficient(swarm(1e10), 0.45, phys);
  CHECK(1.0 / k10 == doctest::Approx(11.817254524573231).epsilon(1e-12));
  // 1e12 robots: 100x faster
  const double k12 = robot_sink_coefficient(swarm(1e12), 0.45, phys);
  CHECK(k12 == doctest::Approx(8.4622024339119).epsilon(1e-12));
  CHECK(k12 == doctest::Approx(100.0 * k10).epsilon(1e-12));
  CHECK(robot_sink_rate(0.0, swarm(1e12), 0.45, phys) == 0.0);
  CHECK(robot_sink_rate(1e22, swarm(0), 0.45, phys) == 0.0);
}

TEST_CASE("tissue sink anchors") {
  // far above the half-power concentration the tissue consumes
  // 6e21 molecule/s per m^3 of tissue
  const double per_tissue = tissue_power_density(1e24, phys) / phys.energy_per_o2();
  CHECK(per_tissue == doctest::Approx(6.0e21).epsilon(2e-3));
  // exactly half of that at the Michaelis-Menten midpoint
  CHECK(tissue_power_density(phys.tissue_half_concentration, phys) ==
        doctest::Approx(0.5 * phys.tissue_power_max).epsilon(1e-12));
  // tissue power fraction 0.8 at 0.4e22 with K = 1e21
  CHECK(tissue_power_density(0.4e22, phys) / phys.tissue_power_max ==
        doctest::Approx(0.8).epsilon(1e-12));
  // full plasma-referred sink carries the 99x volume ratio and 1/(1-h)
  const double h_cap = hematocrit_in_vessel(8.0, phys.overall_hematocrit);
  CHECK(tissue_sink_rate(1e24, phys) ==
        doctest::Approx(per_tissue * 99.0 / (1.0 - h_cap)).epsilon(1e-9));
}

TEST_CASE("peclet diagnostic") {
  CHECK(peclet_number(2.5e-3, 2e-3, phys) == doctest::Approx(2500.0).epsilon(1e-12));
}

TEST_CASE("no robots: concentration drops only inside the capillary") {
  const LoopTrace trace = run_loop(0.0);
  const VesselCircuit circuit = build_circuit(default_dataset(), phys);

  double cap_t0 = 0.0;
  for (std::size_t i = 0; i < circuit.capillary_index; ++i)
    cap_t0 += circuit.segments[i].residence_time;
  const double cap_t1 = cap_t0 + circuit.segments[circuit.capillary_index].residence_time;

  double exit_c = 0.0;
  for (const TracePoint& p : trace.points) {
    if (p.t <= cap_t0 + 1e-9)
      CHECK(p.c_plasma == doctest::Approx(phys.o2_lung_concentration).epsilon(1e-9));
    if (p.t >= cap_t1 - 1e-9) {
      if (exit_c == 0.0) exit_c = p.c_plasma;
      CHECK(p.c_plasma == doctest::Approx(exit_c).epsilon(1e-9));
    }
  }
  // venous saturation settles near the resting value
  CHECK(trace.summary.final_saturation > 0.70);
  CHECK(trace.summary.final_saturation < 0.85);
  CHECK_FALSE(trace.summary.depleted);
}

TEST_CASE("concentration is nonincreasing along the loop") {
  for (double count : {0.0, 1e10, 1e12}) {
    const LoopTrace trace = run_loop(count);
    double prev = phys.o2_lung_concentration * (1 + 1e-12);
    for (const TracePoint& p : trace.points) {
      CHECK(p.c_plasma <= prev + 1e10);  // 1e10 molecule/m^3 integrator slack
      prev = p.c_plasma;
    }
  }
}

TEST_CASE("saturation column is slaved to the concentration") {
  const HillCurve hill = HillCurve::from_params(phys);
  const LoopTrace trace = run_loop(1e11);
  for (std::size_t i = 0; i < trace.points.size(); i += 7) {
    const TracePoint& p = trace.points[i];
    CHECK(p.saturation == doctest::Approx(saturation(hill, p.c_plasma)).epsilon(1e-12));
  }
}

TEST_CASE("sampling step stays at or below 50 ms") {
  for (double count : {1e11, 1e12}) {  // 1e12 depletes mid-loop
    const LoopTrace trace = run_loop(count);
    for (std::size_t i = 1; i < trace.points.size(); ++i)
      CHECK(trace.points[i].t - trace.points[i - 1].t <= 0.05 + 1e-9);
  }
}

TEST_CASE("trillion robots deplete the loop before its end") {
  const LoopTrace trace = run_loop(1e12);
  CHECK(trace.summary.depleted);
  CHECK(trace.summary.depletion_time > 0.0);
  CHECK(trace.summary.depletion_time < 60.0);
  CHECK(trace.summary.min_power == 0.0);
  CHECK(trace.summary.final_concentration == 0.0);
}

TEST_CASE("oxygen bookkeeping on a constant-geometry segment") {
  // Uniform large-vessel segment (v_cell = v_plasma): the flux-form content
  // change must equal the integrated robot sink to 1e-4 relative.
  const PhysiologyParams p = phys;
  const RobotSpec robots = swarm(1e11);
  const HillCurve hill = HillCurve::from_params(p);
  const double h = p.overall_hematocrit;
  const double k = robot_sink_coefficient(robots, h, p);

  // integrate dc/dt = -k c / (1 + B) over a 10 s window with small RK4 steps
  double c = 5e22;
  const double dt = 1e-4;
  double sink_integral = 0.0;
  const auto rhs = [&](double cc) {
    const double buffer = h / (1.0 - h) * p.cell_o2_max * saturation_slope(hill, cc);
    return -k * cc / (1.0 + buffer);
  };
  const double c0 = c;
  const double s0 = saturation(hill, c);
  for (int i = 0; i < 100000; ++i) {
    const double k1 = rhs(c);
    const double k2 = rhs(c + 0.5 * dt * k1);
    const double k3 = rhs(c + 0.5 * dt * k2);
    const double k4 = rhs(c + dt * k3);
    // accumulate the sink at the midpoint state
    sink_integral += dt * k * (c + 0.5 * dt * k1);
    c += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  // per unit plasma volume: plasma loss + cell release = robot sink
  const double content_change =
      (c0 - c) + h / (1.0 - h) * p.cell_o2_max * (s0 - saturation(hill, c));
  CHECK(content_change == doctest::Approx(sink_integral).epsilon(1e-4));
}

TEST_CASE("zero cell capacity removes the buffer") {
  PhysiologyParams nobuffer = phys;
  nobuffer.cell_o2_max = 1e-30;  // effectively zero while keeping validate() happy
  const VesselCircuit circuit = build_circuit(default_dataset(), nobuffer);
  const RobotSpec robots = swarm(1e10);
  const LoopTrace trace =
      integrate_loop(circuit, robots, PowerPolicy::unlimited(), nobuffer);
  // without hemoglobin release the integrator reduces to dc/dt = -k c in a
  // large segment (v_cell = v_plasma): successive samples decay exponentially
  const double k = robot_sink_coefficient(robots, nobuffer.overall_hematocrit, nobuffer);
  int compared = 0;
  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    const TracePoint& a = trace.points[i - 1];
    const TracePoint& b = trace.points[i];
    if (a.kind != SegmentKind::large_mixed || b.kind != SegmentKind::large_mixed)
      continue;
    if (a.t < 10.0 || b.t > 20.0) continue;
    CHECK(b.c_plasma / a.c_plasma ==
          doctest::Approx(std::exp(-k * (b.t - a.t))).epsilon(1e-6));
    ++compared;
  }
  CHECK(compared > 10);
}

TEST_CASE("anemia strictly lowers the final concentration") {
  PhysiologyParams anemic = phys;
  anemic.overall_hematocrit = 0.25;
  const VesselCircuit circuit = build_circuit(default_dataset(), anemic);
  for (double count : {1e10, 1e11, 1e12}) {
    const LoopTrace normal = run_loop(count);
    const LoopTrace low =
        integrate_loop(circuit, swarm(count), PowerPolicy::unlimited(), anemic);
    if (normal.summary.depleted && low.summary.depleted) {
      // at the largest count both runs hit zero; anemia gets there sooner
      CHECK(low.summary.depletion_time < normal.summary.depletion_time);
    } else {
      CHECK(low.summary.final_concentration < normal.summary.final_concentration);
    }
  }
}

TEST_CASE("policy traces never drop below the unlimited-policy concentration") {
  const LoopTrace unlimited = run_loop(1e12);
  for (const PowerPolicy& policy :
       {PowerPolicy::fixed_cap(200e-12), PowerPolicy::fraction(0.25),
        PowerPolicy::duty_cycle(0.5)}) {
    const LoopTrace limited = run_loop(1e12, policy);
    // compare on the unlimited trace's sample times by linear interpolation
    std::size_t j = 1;
    for (const TracePoint& p : unlimited.points) {
      while (j + 1 < limited.points.size() && limited.points[j].t < p.t) ++j;
      const TracePoint& a = limited.points[j - 1];
      const TracePoint& b = limited.points[j];
      const double w = b.t > a.t ? (p.t - a.t) / (b.t - a.t) : 0.0;
      const double c_lim = a.c_plasma + w * (b.c_plasma - a.c_plasma);
      CHECK(c_lim >= p.c_plasma - 1e16);
    }
  }
}

TEST_CASE("fixed-cap trace power never exceeds the cap") {
  const double cap = 200e-12;
  const LoopTrace trace = run_loop(1e12, PowerPolicy::fixed_cap(cap));
  for (const TracePoint& p : trace.points) {
    CHECK(p.power_w <= cap * (1 + 1e-9));
    CHECK(p.power_w <= p.power_unlimited_w * (1 + 1e-12));
  }
}

TEST_CASE("unlimited-available power bounds the limited power pointwise") {
  const LoopTrace trace = run_loop(1e11, PowerPolicy::fraction(0.3));
  for (const TracePoint& p : trace.points) {
    CHECK(p.power_unlimited_w >= p.power_w - 1e-20);
    if (p.c_plasma > 0)
      CHECK(p.power_w == doctest::Approx(0.3 * p.power_unlimited_w).epsilon(1e-12));
  }
}

TEST_CASE("total dissipation") {
  const LoopTrace trace = run_loop(1e10);
  const RobotSpec robots = swarm(1e10);
  CHECK(total_dissipation(trace, robots) ==
        doctest::Approx(trace.summary.avg_power * 1e10 / 0.5).epsilon(1e-12));
  const LoopTrace none = run_loop(0.0);
  CHECK(total_dissipation(none, swarm(0.0)) == 0.0);
}

TEST_CASE("capillary-resident swarm") {
  const CapillaryResidentResult r =
      integrate_capillary_resident(swarm(1e10), PowerPolicy::unlimited(), phys);
  // entry equals the robot-independent arterial concentration
  CHECK(r.trace.points.front().c_plasma ==
        doctest::Approx(phys.o2_lung_concentration).epsilon(1e-12));
  const CapillaryResidentResult r2 =
      integrate_capillary_resident(swarm(1e12), PowerPolicy::unlimited(), phys);
  CHECK(r2.trace.points.front().c_plasma ==
        doctest::Approx(r.trace.points.front().c_plasma).epsilon(1e-12));
  // capillary heating averages near 30 kW/m^3 for 1e10 robots
  CHECK(r.mean_heating_w_m3 > 25e3);
  CHECK(r.mean_heating_w_m3 < 36e3);
  // power declines toward the venous end
  CHECK(r.trace.points.back().power_w < r.trace.points.front().power_w);

  // no robots: tissue-only profile, no heating
  const CapillaryResidentResult r0 =
      integrate_capillary_resident(swarm(0.0), PowerPolicy::unlimited(), phys);
  CHECK(r0.mean_heating_w_m3 == doctest::Approx(0.0));
  CHECK(r0.exit_concentration < phys.o2_lung_concentration);
}

TEST_CASE("capillary visit rate") {
  CHECK(capillary_visit_rate(1e12, phys) ==
        doctest::Approx(1.0416666666666667).epsilon(1e-12));
  CHECK(capillary_visit_rate(1e10, phys) ==
        doctest::Approx(0.010416666666666666).epsilon(1e-12));
  CHECK(capillary_visit_rate(0.0, phys) == 0.0);
}
