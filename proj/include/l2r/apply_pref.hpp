#pragma once

#include "l2r/preference.hpp"
#include "l2r/region_graph.hpp"
#include "l2r/road_network.hpp"

namespace l2r {

// Label-settling search on the master weight where, at every vertex with at
// least one outgoing edge matching the slave constraint, only matching edges
// are relaxed. The per-vertex pruning is greedy: the result is not globally
// optimal among constraint-respecting paths, and a destination can become
// unreachable even on a connected network (NoPathError in that case).
Path preference_dijkstra(const RoadNetwork &net, const PreferenceVector &pref,
                         VertexId s, VertexId d);

struct PopulateOptions {
  std::size_t max_center_pairs = 64;
  unsigned threads = 0;
};

// Attaches preference-routed paths to every B-edge, one per reachable
// (from-center, to-center) pair; null preferences fall back to fastest paths.
// B-edges with no reachable pair are flagged dead. Regions without transfer
// centers use the member vertex nearest their centroid as a surrogate.
void populate_b_edge_paths(const RoadNetwork &net, RegionGraphModel &model,
                           const PopulateOptions &opts = {});

} // namespace l2r
