#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "l2r/road_network.hpp"

namespace l2r {

// Undirected popularity graph over the vertices touched by trajectories.
// The two directions of a road segment pool their traversal counts; road type
// of a pooled edge is the most major (lowest ordinal) of its directed parents.
class TrajectoryGraph {
public:
  struct TGEdge {
    VertexId u = kNoVertex; // u < v
    VertexId v = kNoVertex;
    std::uint64_t count = 0; // s_ij: traversals of either direction
    RoadType type = RoadType::residential;
  };

  const std::vector<VertexId> &vertices() const { return vertices_; }
  const std::vector<TGEdge> &edges() const { return edges_; }
  std::uint64_t total_popularity() const { return total_; } // S
  std::uint64_t vertex_popularity(VertexId v) const;        // S_i (0 if absent)
  const std::vector<std::uint32_t> &incident_edges(VertexId v) const;
  bool has_vertex(VertexId v) const { return incident_.count(v) > 0; }

  static TrajectoryGraph build(const RoadNetwork &net,
                               const std::vector<Trajectory> &trajectories);

private:
  std::vector<VertexId> vertices_; // sorted
  std::vector<TGEdge> edges_;
  std::unordered_map<VertexId, std::vector<std::uint32_t>> incident_;
  std::unordered_map<VertexId, std::uint64_t> popularity_;
  std::uint64_t total_ = 0;
};

inline TrajectoryGraph build_trajectory_graph(const RoadNetwork &net,
                                              const std::vector<Trajectory> &trajectories) {
  return TrajectoryGraph::build(net, trajectories);
}

} // namespace l2r
