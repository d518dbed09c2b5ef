#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "l2r/clustering.hpp"
#include "l2r/preference.hpp"
#include "l2r/road_network.hpp"

namespace l2r {

enum class RegionEdgeKind : std::uint8_t { T, B };
enum class PreferenceSource : std::uint8_t { None, Learned, Transferred, NullFallback };

struct RegionEdgeFeatures {
  double dis_m = 0;                                  // centroid distance
  std::vector<std::pair<RoadType, RoadType>> f;      // ordered road-type pairs
};

// Directed region-graph edge. T-edges carry trajectory sub-paths; B-edges are
// connectivity fills that receive transferred preferences and synthetic paths.
struct RegionEdge {
  std::uint32_t id = 0;
  RegionId from = kNoRegion;
  RegionId to = kNoRegion;
  RegionEdgeKind kind = RegionEdgeKind::T;
  std::vector<WeightedPath> paths;
  std::optional<PreferenceVector> preference;
  PreferenceSource pref_source = PreferenceSource::None;
  std::optional<RegionEdgeFeatures> features;
  bool dead = false; // no usable path could be attached
};

// A region's docking point: a vertex where some trajectory entered or left it.
struct TransferCenter {
  VertexId vertex = kNoVertex;
  std::uint32_t traj_count = 0;
};

struct RegionNode {
  Region region;
  std::vector<TransferCenter> centers;    // sorted by vertex id
  std::vector<WeightedPath> inner_paths;  // deduplicated, trajectory-backed
};

class RegionGraphModel {
public:
  std::vector<RegionNode> nodes;
  std::vector<RegionEdge> edges;

  // vertex -> region (kNoRegion when outside all regions); sized to the network
  std::vector<RegionId> region_of;

  RegionId region_of_vertex(VertexId v) const {
    return v < region_of.size() ? region_of[v] : kNoRegion;
  }
  const RegionEdge *find_edge(RegionId from, RegionId to) const;
  RegionEdge *find_edge(RegionId from, RegionId to);
  const std::vector<std::uint32_t> &out_edges(RegionId r) const;

  void add_edge(RegionEdge e);
  void rebuild_indexes();

private:
  std::unordered_map<std::uint64_t, std::uint32_t> edge_by_pair_;
  std::vector<std::vector<std::uint32_t>> out_by_region_;
};

// T-edges, transfer centers, and inner paths from the trajectories. Regions
// are copied into the model; trajectories must validate on the network.
RegionGraphModel build_t_edges(const RoadNetwork &net, const std::vector<Region> &regions,
                               const std::vector<Trajectory> &trajectories);

// Per-region deduplicated inner paths: the maximal sub-path each trajectory
// traced between entering and leaving the region (whole-trajectory start/end
// count as entry/exit). Indexed like `regions`.
std::vector<std::vector<WeightedPath>> extract_inner_paths(
    const std::vector<Region> &regions, const std::vector<Trajectory> &trajectories,
    std::size_t vertex_count);

// Per-region multi-source BFS over the road network (both edge orientations),
// halting at foreign-region vertices; adds symmetric B-edges for reached
// regions with no existing edge in either direction.
void build_b_edges(const RoadNetwork &net, RegionGraphModel &model);

// True when the undirected collapse of the region graph is connected.
bool region_graph_connected(const RegionGraphModel &model);

} // namespace l2r
