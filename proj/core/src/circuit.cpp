#include "hemoswarm/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace hemoswarm {

namespace {
constexpr double pi = std::numbers::pi;

// Body capillary stage: typical diameter, length and average flow speed.
constexpr double capillary_diameter = 8e-6;
constexpr double capillary_length = 1e-3;
constexpr double capillary_v_avg = 1e-3;

// Representative aggregate geometry for the large-vessel stages. Only their
// transit time enters the oxygen model; diameter and speed shape the x(t) map.
constexpr double large_diameter = 30e-3;
constexpr double large_speed = 0.12;

VesselSegment make_segment(SegmentKind kind, VesselClass vclass, double d,
                           double length, double n,
                           const PhysiologyParams& phys) {
  VesselSegment s{};
  s.kind = kind;
  s.vclass = vclass;
  s.diameter = d;
  s.length = length;
  s.parallel_count = n;
  s.hematocrit = hematocrit_in_vessel(d * 1e6, phys.overall_hematocrit);
  const SegmentSpeeds sp = segment_speeds(d, n, s.hematocrit, phys);
  s.v_avg = sp.v_avg;
  s.v_plasma = sp.v_plasma;
  s.v_cell = sp.v_cell;
  s.fluid_transit_time = length / sp.v_avg;
  s.residence_time = length / sp.v_cell;
  s.tissue_sink = (kind == SegmentKind::capillary);
  return s;
}

VesselSegment make_large(VesselClass vclass, double residence,
                         const PhysiologyParams& phys) {
  const double n =
      phys.total_flow() / ((pi / 4.0) * large_diameter * large_diameter * large_speed);
  return make_segment(SegmentKind::large_mixed, vclass, large_diameter,
                      large_speed * residence, n, phys);
}
}  // namespace

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::small_vein: return "small_vein";
    case SegmentKind::large_mixed: return "large_mixed";
    case SegmentKind::small_artery: return "small_artery";
    case SegmentKind::capillary: return "capillary";
  }
  return "?";
}

const char* to_string(VesselClass vclass) {
  switch (vclass) {
    case VesselClass::arterial: return "arterial";
    case VesselClass::capillary: return "capillary";
    case VesselClass::venous: return "venous";
  }
  return "?";
}

double hematocrit_in_vessel(double diameter_um, double h_full) {
  if (diameter_um <= 0.0)
    throw std::invalid_argument("vessel diameter must be positive");
  if (h_full <= 0.0 || h_full >= 1.0)
    throw std::invalid_argument("overall hematocrit must lie in (0,1)");
  const double rel = h_full + (1.0 - h_full) * (1.0 + 1.7 * std::exp(-0.35 * diameter_um) -
                                                0.6 * std::exp(-0.01 * diameter_um));
  return h_full * rel;
}

double cell_plasma_speed_ratio(double h, double h_full) {
  if (h <= 0.0 || h_full <= 0.0 || h_full >= 1.0)
    throw std::invalid_argument("hematocrit out of range");
  if (h > h_full)
    throw std::invalid_argument(
        "vessel hematocrit cannot exceed the overall hematocrit");
  return ((1.0 - h) / h) / ((1.0 - h_full) / h_full);
}

SegmentSpeeds segment_speeds(double diameter, double parallel_count,
                             double hematocrit, const PhysiologyParams& phys) {
  if (parallel_count <= 0.0)
    throw std::invalid_argument("parallel_count must be positive");
  if (diameter <= 0.0) throw std::invalid_argument("diameter must be positive");
  const double area = (pi / 4.0) * diameter * diameter * parallel_count;
  const double v_avg = phys.total_flow() / area;
  const double ratio = cell_plasma_speed_ratio(hematocrit, phys.overall_hematocrit);
  const double v_plasma = v_avg / ((1.0 - hematocrit) + hematocrit * ratio);
  return SegmentSpeeds{v_avg, v_plasma, ratio * v_plasma};
}

BranchingDataset parse_branching_csv(std::istream& in) {
  BranchingDataset ds;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    if (line[0] == '#') {
      if (ds.version == "unversioned") {
        std::string v = line.substr(1);
        const auto b = v.find_first_not_of(' ');
        if (b != std::string::npos) ds.version = v.substr(b);
      }
      continue;
    }
    if (!have_header) {
      if (line != "tree,order,diameter_m,length_m,count")
        throw std::invalid_argument("branching CSV: unexpected header: " + line);
      have_header = true;
      continue;
    }
    std::istringstream ss(line);
    std::string tree, field;
    BranchingRow row{};
    try {
      std::getline(ss, tree, ',');
      std::getline(ss, field, ',');
      row.order = std::stoi(field);
      std::getline(ss, field, ',');
      row.diameter = std::stod(field);
      std::getline(ss, field, ',');
      row.length = std::stod(field);
      std::getline(ss, field, ',');
      row.count = std::stod(field);
    } catch (const std::exception&) {
      throw std::invalid_argument("branching CSV: malformed row: " + line);
    }
    if (row.diameter <= 0 || row.length <= 0 || row.count <= 0)
      throw std::invalid_argument("branching CSV: nonpositive geometry: " + line);
    if (tree == "arterial")
      ds.arterial.push_back(row);
    else if (tree == "venous")
      ds.venous.push_back(row);
    else
      throw std::invalid_argument("branching CSV: unknown tree: " + tree);
  }
  if (!have_header)
    throw std::invalid_argument("branching CSV: missing header");
  auto by_diameter_desc = [](const BranchingRow& a, const BranchingRow& b) {
    return a.diameter > b.diameter;
  };
  std::sort(ds.arterial.begin(), ds.arterial.end(), by_diameter_desc);
  std::sort(ds.venous.begin(), ds.venous.end(), by_diameter_desc);
  return ds;
}

BranchingDataset load_branching_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open branching dataset: " + path);
  return parse_branching_csv(in);
}

VesselCircuit build_circuit(const BranchingDataset& dataset,
                            const PhysiologyParams& phys) {
  phys.validate();
  VesselCircuit circuit;
  circuit.dataset_version = dataset.version;

  const double n_capillary =
      phys.total_flow() /
      ((pi / 4.0) * capillary_diameter * capillary_diameter * capillary_v_avg);

  auto tree_segments = [&](const std::vector<BranchingRow>& rows,
                           SegmentKind kind, VesselClass vclass,
                           bool ascending) {
    std::vector<VesselSegment> out;
    out.reserve(rows.size());
    for (const BranchingRow& r : rows)
      out.push_back(make_segment(kind, vclass, r.diameter, r.length, r.count, phys));
    if (ascending) std::reverse(out.begin(), out.end());
    return out;
  };

  // Parts 1..7 of the loop; the dataset trees are traversed twice each.
  const auto veins_up_body =
      tree_segments(dataset.venous, SegmentKind::small_vein, VesselClass::venous, true);
  const auto veins_up_lung = tree_segments(dataset.venous, SegmentKind::small_vein,
                                           VesselClass::arterial, true);
  const auto arteries_down_body = tree_segments(
      dataset.arterial, SegmentKind::small_artery, VesselClass::arterial, false);
  const auto arteries_down_lung = tree_segments(
      dataset.arterial, SegmentKind::small_artery, VesselClass::venous, false);
  const VesselSegment capillary =
      make_segment(SegmentKind::capillary, VesselClass::capillary,
                   capillary_diameter, capillary_length, n_capillary, phys);

  double small_residence = capillary.residence_time;
  for (const auto& s : veins_up_body) small_residence += 2.0 * s.residence_time;
  for (const auto& s : arteries_down_body) small_residence += 2.0 * s.residence_time;

  const double residual = phys.circulation_time - small_residence;
  if (residual <= 0.0)
    throw std::invalid_argument(
        "branching dataset transit time exceeds the circulation time");
  // Time in the vein-side large vessels is 1.5x the artery-side time.
  const double large_arterial = residual / 2.5;
  const double large_venous = 1.5 * residual / 2.5;

  auto append = [&](const std::vector<VesselSegment>& part) {
    circuit.segments.insert(circuit.segments.end(), part.begin(), part.end());
  };
  append(veins_up_lung);
  circuit.segments.push_back(make_large(VesselClass::arterial, large_arterial, phys));
  append(arteries_down_body);
  circuit.capillary_index = circuit.segments.size();
  circuit.segments.push_back(capillary);
  append(veins_up_body);
  circuit.segments.push_back(make_large(VesselClass::venous, large_venous, phys));
  append(arteries_down_lung);

  for (const auto& s : circuit.segments) {
    circuit.total_time += s.residence_time;
    circuit.total_length += s.length;
  }
  return circuit;
}

LoopPosition position_of_time(const VesselCircuit& circuit, double t) {
  if (t < 0.0 || t > circuit.total_time * (1.0 + 1e-12))
    throw std::out_of_range("time outside the circulation loop");
  double t0 = 0.0;
  double x0 = 0.0;
  for (std::size_t i = 0; i < circuit.segments.size(); ++i) {
    const VesselSegment& s = circuit.segments[i];
    const double t1 = t0 + s.residence_time;
    if (t <= t1 || i + 1 == circuit.segments.size()) {
      const double local = std::min(s.v_cell * (t - t0), s.length);
      return LoopPosition{i, local, x0 + local};
    }
    t0 = t1;
    x0 += s.length;
  }
  return LoopPosition{circuit.segments.size() - 1, 0.0, circuit.total_length};
}

}  // namespace hemoswarm
