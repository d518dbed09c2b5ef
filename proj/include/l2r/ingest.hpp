#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "l2r/preference.hpp"
#include "l2r/road_network.hpp"

namespace l2r {

// Half-open seconds-of-day window; wraps midnight when begin > end.
struct TimeWindow {
  int begin_s = 0;
  int end_s = 86400;
  bool contains(std::int64_t departure_epoch_s) const {
    const int t = static_cast<int>(((departure_epoch_s % 86400) + 86400) % 86400);
    if (begin_s <= end_s) return t >= begin_s && t < end_s;
    return t >= begin_s || t < end_s;
  }
};
TimeWindow parse_time_window(const std::string &spec); // "HH:MM-HH:MM"

// nodes.csv: node_id,lon,lat
// edges.csv: edge_id,from,to,length_m,speed_kmh,road_type,oneway
// oneway=false expands to two directed edges sharing attributes.
RoadNetwork load_road_network(const std::string &nodes_file, const std::string &edges_file,
                              FuelModel fuel = FuelModel{});

void save_road_network(const RoadNetwork &net, const std::string &nodes_file,
                       const std::string &edges_file);

struct RejectRecord {
  std::size_t line = 0;
  std::int64_t traj_id = 0;
  std::string reason;
};

struct LoadReport {
  std::size_t records = 0;
  std::size_t accepted = 0;
  std::vector<RejectRecord> rejects;
};

// trajectories.jsonl, one record per line with original node ids. Records with
// invalid paths are skipped and reported, never fatal.
std::vector<Trajectory> load_trajectories(const std::string &traj_file, const RoadNetwork &net,
                                          std::optional<TimeWindow> window = std::nullopt,
                                          LoadReport *report = nullptr);

void save_trajectories(const RoadNetwork &net, const std::vector<Trajectory> &trajectories,
                       const std::string &traj_file);

// Grid-world generator configuration. Horizontal edges in row r take
// row_types[r % size]; vertical edges in column c take col_types[c % size];
// explicit overrides win. Blocks partition the grid into block_rows x
// block_cols tiles addressed row-major.
struct SyntheticConfig {
  int grid_rows = 8;
  int grid_cols = 8;
  std::vector<RoadType> row_types = {RoadType::tertiary};
  std::vector<RoadType> col_types = {RoadType::residential};
  // (row, col_from) -> type for the horizontal edge pair between (row,c) and (row,c+1)
  std::map<std::pair<int, int>, RoadType> horizontal_overrides;
  // (row_from, col) -> type for the vertical edge pair between (r,c) and (r+1,c)
  std::map<std::pair<int, int>, RoadType> vertical_overrides;
  // omitted lattice links (rivers, rail cuts); keys as in the override maps
  std::set<std::pair<int, int>> horizontal_gaps;
  std::set<std::pair<int, int>> vertical_gaps;

  int block_rows = 2;
  int block_cols = 2;
  std::map<std::pair<int, int>, PreferenceVector> planted_preferences;
  // relative sampling weight per planted pair when only_planted_pairs is set
  // (absent keys weigh 1)
  std::map<std::pair<int, int>, int> planted_weights;
  PreferenceVector default_preference{CostKind::TT, SlaveSet::none()};
  bool only_planted_pairs = false; // sample sources/destinations only from planted block pairs

  int trajectory_count = 0;
  std::uint64_t rng_seed = 1;
  double detour_noise = 0.0;        // probability of rerouting via a random midpoint
  double cell_m = 500.0;            // nominal horizontal grid spacing
  double cell_y_m = 0.0;            // vertical spacing; 0 means same as cell_m
  double length_jitter = 0.2;       // +-20% deterministic per-edge variation
  std::int64_t departure_span_s = 2592000; // departures uniform in [0, span)
  double base_lon = 10.0;
  double base_lat = 56.0;
  FuelModel fuel;
  std::map<RoadType, double> speeds_kmh;      // defaults filled in when empty
  std::map<RoadType, double> length_factors;  // winding-road multipliers, default 1

  int block_of(int row, int col) const;
  void validate() const; // throws Error on out-of-range fields
};

double default_speed_kmh(RoadType t);

struct SyntheticWorld {
  RoadNetwork net;
  std::vector<Trajectory> trajectories;
  // Ground truth, parallel to trajectories: the preference each was routed
  // with, its block pair, and whether detour noise fired.
  std::vector<PreferenceVector> planted;
  std::vector<std::pair<int, int>> block_pairs;
  std::vector<bool> detoured;

  VertexId grid_vertex(int row, int col, int grid_cols) const {
    return static_cast<VertexId>(row * grid_cols + col);
  }
};

// Deterministic in cfg (identical seeds give byte-identical worlds). Every
// trajectory is routed with its block pair's planted preference via the
// preference-constrained search; unreachable samples are retried a bounded
// number of times.
SyntheticWorld generate_synthetic(const SyntheticConfig &cfg);

} // namespace l2r
