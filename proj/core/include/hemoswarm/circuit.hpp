#pragma once

/**
 * @file circuit.hpp
 * @brief Averaged single-loop vessel circuit: segment geometry,
 *        diameter-dependent hematocrit, plasma/cell speeds and the
 *        position-vs-time map for a volume moving with the cells.
 */

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hemoswarm/params.hpp"

namespace hemoswarm {

enum class SegmentKind { small_vein, large_mixed, small_artery, capillary };

/// Position of a segment relative to the body capillary; power policies key
/// their per-location limits off this classification.
enum class VesselClass { arterial, capillary, venous };

const char* to_string(SegmentKind kind);
const char* to_string(VesselClass vclass);

struct VesselSegment {
  SegmentKind kind;
  VesselClass vclass;
  double diameter;        // m
  double length;          // m
  double parallel_count;  // aggregated vessels at this stage
  double hematocrit;
  double v_avg;            // m/s, whole-blood speed from flow conservation
  double v_plasma;         // m/s
  double v_cell;           // m/s
  double fluid_transit_time;  // length / v_avg
  double residence_time;      // length / v_cell; time spent by the moving volume
  bool tissue_sink;           // true only for the body capillary
};

struct VesselCircuit {
  std::vector<VesselSegment> segments;
  double total_time = 0.0;  // sum of residence times == circulation_time
  double total_length = 0.0;
  std::size_t capillary_index = 0;
  std::string dataset_version;
};

/// One row of the branching-geometry table.
struct BranchingRow {
  int order;
  double diameter;  // m
  double length;    // m
  double count;
};

struct BranchingDataset {
  std::vector<BranchingRow> arterial;  // sorted large -> small diameter
  std::vector<BranchingRow> venous;
  std::string version = "unversioned";
};

/// Parses the `tree,order,diameter_m,length_m,count` CSV. Lines starting
/// with '#' are comments; a leading `# <text>` comment becomes the dataset
/// version string. Throws std::invalid_argument on malformed rows.
BranchingDataset parse_branching_csv(std::istream& in);
BranchingDataset load_branching_csv(const std::string& path);

/// The dataset bundled with the library (also shipped as
/// data/circuit_default.csv).
const BranchingDataset& default_dataset();

/// Fahraeus reduction of tube hematocrit with vessel diameter (in microns):
/// h/h_full = h_full + (1-h_full)(1 + 1.7 e^(-0.35 d) - 0.6 e^(-0.01 d)).
double hematocrit_in_vessel(double diameter_um, double h_full);

/// v_cell / v_plasma = [(1-h)/h] / [(1-h_full)/h_full]. Requires
/// 0 < h <= h_full < 1; the Fahraeus effect only reduces hematocrit.
double cell_plasma_speed_ratio(double h, double h_full);

struct SegmentSpeeds {
  double v_avg;
  double v_plasma;
  double v_cell;
};

/// Average speed from flow conservation N (pi/4) d^2 v = V_blood / T, then
/// plasma and cell speeds from the average-flow identity
/// v_avg = (1-h) v_plasma + h v_cell jointly with the speed ratio.
SegmentSpeeds segment_speeds(double diameter, double parallel_count,
                             double hematocrit, const PhysiologyParams& phys);

/// Builds the seven-part loop (small veins from the lung, large mixed
/// vessels, small arteries, the body capillary, small veins, large mixed
/// vessels, small arteries back to the lung). The large-vessel residual is
/// chosen so the moving volume completes the loop in exactly
/// circulation_time, split 1.5:1 between the venous-side and arterial-side
/// large segments.
VesselCircuit build_circuit(const BranchingDataset& dataset,
                            const PhysiologyParams& phys);

struct LoopPosition {
  std::size_t segment_index;
  double local_offset;  // m into the segment
  double x;             // m from loop start
};

/// Piecewise advance at v_cell; strictly increasing and surjective onto the
/// loop length over t in [0, total_time]. Throws std::out_of_range outside.
LoopPosition position_of_time(const VesselCircuit& circuit, double t);

}  // namespace hemoswarm
