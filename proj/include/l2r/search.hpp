#pragma once

#include <optional>

#include "l2r/road_network.hpp"

namespace l2r {

// Plain Dijkstra between two vertices. Ties are broken by settling the lower
// vertex id first and never relaxing on equal cost, which pins down a unique
// path for fixed inputs.
std::optional<Path> try_shortest_path(const RoadNetwork &net, VertexId s, VertexId d,
                                      CostKind kind);

// As above but throws NoPathError when d is unreachable.
Path shortest_path(const RoadNetwork &net, VertexId s, VertexId d, CostKind kind);

} // namespace l2r
