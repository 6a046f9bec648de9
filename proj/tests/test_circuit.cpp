#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hemoswarm/circuit.hpp"

using namespace hemoswarm;

TEST_CASE("vessel hematocrit anchors") {
  // 8 um capillary at 45% overall hematocrit
  CHECK(hematocrit_in_vessel(8.0, 0.45) ==
        doctest::Approx(0.33850305641114503).epsilon(1e-12));
  // golden value at 100 um
  CHECK(hematocrit_in_vessel(100.0, 0.45) ==
        doctest::Approx(0.39536990298604113).epsilon(1e-12));
  // very large vessels recover the overall hematocrit within 0.5%
  CHECK(hematocrit_in_vessel(1e4, 0.45) == doctest::Approx(0.45).epsilon(5e-3));
  CHECK_THROWS_AS(hematocrit_in_vessel(0.0, 0.45), std::invalid_argument);
  CHECK_THROWS_AS(hematocrit_in_vessel(8.0, 1.5), std::invalid_argument);
}

TEST_CASE("vessel hematocrit stays below the overall value and recovers") {
  // The correlation is not monotone at the smallest diameters: the fast
  // e^(-0.35 d) term and the slow e^(-0.01 d) recovery cross near 13.5 um,
  // giving a shallow minimum there. Monotone nondecreasing holds above it.
  double prev = 0.0;
  for (double d = 13.6; d <= 1000.0; d *= 1.05) {
    const double h = hematocrit_in_vessel(d, 0.45);
    CHECK(h >= prev);
    prev = h;
  }
  for (double d = 4.0; d <= 1000.0; d *= 1.05)
    CHECK(hematocrit_in_vessel(d, 0.45) < 0.45);
}

TEST_CASE("cell/plasma speed ratio") {
  CHECK(cell_plasma_speed_ratio(0.45, 0.45) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cell_plasma_speed_ratio(0.3385, 0.45) ==
        doctest::Approx(1.5988988854572308).epsilon(1e-12));
  CHECK(cell_plasma_speed_ratio(0.30, 0.45) ==
        doctest::Approx(1.909090909090909).epsilon(1e-12));
  CHECK_THROWS_AS(cell_plasma_speed_ratio(0.5, 0.45), std::invalid_argument);
}

TEST_CASE("speed ratio is >= 1 with equality only at the overall hematocrit") {
  for (double h = 0.05; h <= 0.45 + 1e-12; h += 0.05) {
    const double ratio = cell_plasma_speed_ratio(h, 0.45);
    if (std::abs(h - 0.45) < 1e-12)
      CHECK(ratio == doctest::Approx(1.0));
    else
      CHECK(ratio > 1.0);
  }
}

TEST_CASE("segment speeds satisfy the average-flow identity") {
  const PhysiologyParams phys = default_params();
  const double h = hematocrit_in_vessel(8.0, phys.overall_hematocrit);
  const SegmentSpeeds sp = segment_speeds(8e-6, 1.7904931097838231e9, h, phys);
  // capillary stage average speed is pinned at 1 mm/s by its parallel count
  CHECK(sp.v_avg == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK((1.0 - h) * sp.v_plasma + h * sp.v_cell ==
        doctest::Approx(sp.v_avg).epsilon(1e-14));
  CHECK(sp.v_cell / sp.v_plasma ==
        doctest::Approx(cell_plasma_speed_ratio(h, phys.overall_hematocrit)).epsilon(1e-14));
  CHECK_THROWS_AS(segment_speeds(8e-6, 0.0, h, phys), std::invalid_argument);
}

TEST_CASE("large vessels have equal cell and plasma speeds") {
  const PhysiologyParams phys = default_params();
  const SegmentSpeeds sp = segment_speeds(0.03, 1.0, phys.overall_hematocrit, phys);
  CHECK(sp.v_plasma == doctest::Approx(sp.v_avg).epsilon(1e-14));
  CHECK(sp.v_cell == doctest::Approx(sp.v_avg).epsilon(1e-14));
}

TEST_CASE("bundled dataset builds the reference circuit") {
  const PhysiologyParams phys = default_params();
  const VesselCircuit circuit = build_circuit(default_dataset(), phys);

  // one-minute loop in the moving-volume clock
  CHECK(circuit.total_time == doctest::Approx(60.0).epsilon(1e-9));
  CHECK(circuit.dataset_version.find("v1") != std::string::npos);

  // exactly one capillary, with tissue consumption enabled
  int capillaries = 0;
  for (const auto& s : circuit.segments)
    if (s.kind == SegmentKind::capillary) {
      ++capillaries;
      CHECK(s.tissue_sink);
      CHECK(s.diameter == doctest::Approx(8e-6));
      CHECK(s.length == doctest::Approx(1e-3));
      CHECK(s.fluid_transit_time == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(s.hematocrit == doctest::Approx(0.33850305641114503).epsilon(1e-12));
    } else {
      CHECK_FALSE(s.tissue_sink);
    }
  CHECK(capillaries == 1);
  CHECK(circuit.segments[circuit.capillary_index].kind == SegmentKind::capillary);

  // seven-part order: veins up, large, arteries down, capillary, veins up,
  // large, arteries down
  const std::size_t n = circuit.segments.size();
  CHECK(circuit.segments.front().kind == SegmentKind::small_vein);
  CHECK(circuit.segments.back().kind == SegmentKind::small_artery);
  int large = 0;
  for (const auto& s : circuit.segments)
    if (s.kind == SegmentKind::large_mixed) ++large;
  CHECK(large == 2);
  CHECK(n == 2 * (15 + 15) + 2 + 1);

  // capillary speed lands in the physiological 0.2..1 mm/s band
  const VesselSegment& cap = circuit.segments[circuit.capillary_index];
  CHECK(cap.v_avg >= 0.2e-3);
  CHECK(cap.v_avg <= 1.0e-3 * (1 + 1e-12));

  // vein-side large segment carries 1.5x the arterial-side time
  const VesselSegment* large_art = nullptr;
  const VesselSegment* large_ven = nullptr;
  for (const auto& s : circuit.segments)
    if (s.kind == SegmentKind::large_mixed)
      (large_art ? large_ven : large_art) = &s;
  REQUIRE(large_ven != nullptr);
  CHECK(large_ven->residence_time / large_art->residence_time ==
        doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("flow conservation holds across all segments") {
  const PhysiologyParams phys = default_params();
  const VesselCircuit circuit = build_circuit(default_dataset(), phys);
  const double q = phys.total_flow();
  for (const auto& s : circuit.segments) {
    const double flow = s.v_avg * (std::numbers::pi / 4.0) * s.diameter *
                        s.diameter * s.parallel_count;
    CHECK(flow == doctest::Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("each small-vessel tree contributes 2-4 s of transit") {
  const PhysiologyParams phys = default_params();
  const BranchingDataset& ds = default_dataset();
  for (const auto* tree : {&ds.arterial, &ds.venous}) {
    double t_fluid = 0.0;
    for (const auto& row : *tree) {
      const double h = hematocrit_in_vessel(row.diameter * 1e6, phys.overall_hematocrit);
      t_fluid += row.length / segment_speeds(row.diameter, row.count, h, phys).v_avg;
    }
    CHECK(t_fluid >= 2.0);
    CHECK(t_fluid <= 4.5);
  }
}

TEST_CASE("empty dataset degenerates to large vessels plus the capillary") {
  const PhysiologyParams phys = default_params();
  BranchingDataset empty;
  empty.version = "empty";
  const VesselCircuit circuit = build_circuit(empty, phys);
  CHECK(circuit.total_time == doctest::Approx(60.0).epsilon(1e-9));
  CHECK(circuit.segments.size() == 3);
  CHECK(circuit.segments[1].kind == SegmentKind::capillary);
}

TEST_CASE("dataset longer than the circulation time is rejected") {
  const PhysiologyParams phys = default_params();
  BranchingDataset ds;
  ds.arterial.push_back({1, 1e-4, 10.0, 1e7});  // absurdly long vessels
  ds.venous.push_back({1, 1e-4, 10.0, 1e7});
  CHECK_THROWS_AS(build_circuit(ds, phys), std::invalid_argument);
}

TEST_CASE("position map advances at the cell speed and spans the loop") {
  const PhysiologyParams phys = default_params();
  const VesselCircuit circuit = build_circuit(default_dataset(), phys);

  const LoopPosition start = position_of_time(circuit, 0.0);
  CHECK(start.segment_index == 0);
  CHECK(start.x == 0.0);

  const LoopPosition end = position_of_time(circuit, circuit.total_time);
  CHECK(end.segment_index == circuit.segments.size() - 1);
  CHECK(end.x == doctest::Approx(circuit.total_length).epsilon(1e-12));

  // capillary entry time from a cumulative-sum oracle over segment times
  double entry = 0.0;
  for (std::size_t i = 0; i < circuit.capillary_index; ++i)
    entry += circuit.segments[i].residence_time;
  const LoopPosition at_entry = position_of_time(circuit, entry + 1e-9);
  CHECK(at_entry.segment_index == circuit.capillary_index);
  CHECK(at_entry.local_offset == doctest::Approx(0.0).epsilon(1e-6));

  CHECK_THROWS_AS(position_of_time(circuit, -1.0), std::out_of_range);
  CHECK_THROWS_AS(position_of_time(circuit, circuit.total_time + 1.0), std::out_of_range);
}

TEST_CASE("position map is strictly increasing") {
  const PhysiologyParams phys = default_params();
  const VesselCircuit circuit = build_circuit(default_dataset(), phys);
  double prev = -1.0;
  for (double t = 0.0; t <= circuit.total_time; t += 0.05) {
    const double x = position_of_time(circuit, t).x;
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("CSV parser accepts the bundled format and rejects junk") {
  std::istringstream good(
      "# dataset v9\n"
      "tree,order,diameter_m,length_m,count\n"
      "arterial,1,2e-3,1.6e-2,994\n"
      "venous,1,2e-3,1.9e-2,994\n");
  const BranchingDataset ds = parse_branching_csv(good);
  CHECK(ds.version == "dataset v9");
  CHECK(ds.arterial.size() == 1);
  CHECK(ds.venous.size() == 1);

  std::istringstream bad_header("diameter,count\n1,2\n");
  CHECK_THROWS_AS(parse_branching_csv(bad_header), std::invalid_argument);

  std::istringstream bad_row(
      "tree,order,diameter_m,length_m,count\n"
      "arterial,1,-2e-3,1.6e-2,994\n");
  CHECK_THROWS_AS(parse_branching_csv(bad_row), std::invalid_argument);

  std::istringstream bad_tree(
      "tree,order,diameter_m,length_m,count\n"
      "lymphatic,1,2e-3,1.6e-2,994\n");
  CHECK_THROWS_AS(parse_branching_csv(bad_tree), std::invalid_argument);
}
