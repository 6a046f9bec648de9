#include <doctest.h>

#include <cmath>

#include "hemoswarm/params.hpp"

using namespace hemoswarm;

TEST_CASE("default parameters carry the standard values exactly") {
  const PhysiologyParams p = default_params();
  CHECK(p.capillary_radius == 4e-6);
  CHECK(p.tissue_cylinder_radius == 40e-6);
  CHECK(p.overall_hematocrit == 0.45);
  CHECK(p.blood_volume == 5.4e-3);
  CHECK(p.circulation_time == 60.0);
  CHECK(p.tissue_power_max == 4.0e3);
  CHECK(p.tissue_half_concentration == 1e21);
  CHECK(p.glucose_reaction_energy == 4e-18);
  CHECK(p.hill_p_half == 3500.0);
  CHECK(p.hill_exponent == 2.7);
  CHECK(p.cell_o2_max == 1e25);
  CHECK(p.o2_diffusion == 2e-9);
  CHECK(p.o2_lung_concentration == 7e22);
  CHECK(p.henry_ratio == 1.6e-19);
  CHECK_NOTHROW(p.validate());
  // tissue-to-capillary volume ratio (40/4)^2 - 1
  CHECK(p.tissue_volume_ratio() == doctest::Approx(99.0).epsilon(1e-12));
}

TEST_CASE("parameter invariants are enforced") {
  PhysiologyParams p = default_params();
  p.overall_hematocrit = 1.2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = default_params();
  p.tissue_cylinder_radius = p.capillary_radius / 2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  RobotSpec r;
  r.count = -1;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = RobotSpec{};
  r.fuel_cell_efficiency = 0.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("Henry's law conversion") {
  const PhysiologyParams p = default_params();
  // 1e22 molecule/m^3 is 1600 Pa, about 12 mmHg
  CHECK(concentration_to_partial_pressure(1e22, p) == doctest::Approx(1600.0));
  CHECK(concentration_to_partial_pressure(1e22, p) / units::pascal_per_mmHg ==
        doctest::Approx(12.0).epsilon(0.01));
  CHECK(concentration_to_partial_pressure(0.0, p) == 0.0);
  // 2.5e22 is about 30 mmHg (venous range)
  CHECK(concentration_to_partial_pressure(2.5e22, p) / units::pascal_per_mmHg ==
        doctest::Approx(30.0).epsilon(0.001));
  CHECK_THROWS_AS(concentration_to_partial_pressure(-1.0, p), std::invalid_argument);
}

TEST_CASE("Henry's law conversion is linear and round-trips") {
  const PhysiologyParams p = default_params();
  for (double c : {1e20, 3.3e21, 7e22, 1e25}) {
    const double pressure = concentration_to_partial_pressure(c, p);
    CHECK(partial_pressure_to_concentration(pressure, p) ==
          doctest::Approx(c).epsilon(1e-15));
  }
  const double a = concentration_to_partial_pressure(2e22, p);
  const double b = concentration_to_partial_pressure(5e22, p);
  CHECK(concentration_to_partial_pressure(7e22, p) ==
        doctest::Approx(a + b).epsilon(1e-15));
}

TEST_CASE("scenario metrics reproduce the swarm-property table") {
  const PhysiologyParams p = default_params();
  RobotSpec r;

  r.count = 1e12;
  ScenarioMetrics m = scenario_metrics(r, p);
  CHECK(m.nanocrit == doctest::Approx(7.757018897752574e-4).epsilon(1e-12));
  CHECK(m.number_density == doctest::Approx(1.8518518518518519e14).epsilon(1e-12));
  CHECK(m.spacing_large_vessel == doctest::Approx(1.7544106429277206e-5).epsilon(1e-12));
  CHECK(m.spacing_body == doctest::Approx(3.684031498640389e-5).epsilon(1e-12));
  REQUIRE(m.spacing_capillary.has_value());
  CHECK(*m.spacing_capillary == doctest::Approx(1.0742958658702937e-4).epsilon(1e-12));

  r.count = 1e10;
  m = scenario_metrics(r, p);
  CHECK(m.nanocrit == doctest::Approx(7.757018897752574e-6).epsilon(1e-12));
  CHECK(m.spacing_large_vessel == doctest::Approx(8.143252849784724e-5).epsilon(1e-12));
  CHECK(m.spacing_body == doctest::Approx(1.7099759466766978e-4).epsilon(1e-12));
  // spacing along one capillary would exceed the 1 mm capillary length
  CHECK_FALSE(m.spacing_capillary.has_value());

  r.count = 0;
  m = scenario_metrics(r, p);
  CHECK(m.nanocrit == 0.0);
  CHECK(m.number_density == 0.0);
}

TEST_CASE("robot spacing scales as count^(-1/3)") {
  const PhysiologyParams p = default_params();
  RobotSpec r;
  r.count = 3.7e10;
  const ScenarioMetrics m1 = scenario_metrics(r, p);
  r.count = 7.4e10;
  const ScenarioMetrics m2 = scenario_metrics(r, p);
  CHECK(m1.spacing_large_vessel / m2.spacing_large_vessel ==
        doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
  CHECK(m1.spacing_body / m2.spacing_body ==
        doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
}
