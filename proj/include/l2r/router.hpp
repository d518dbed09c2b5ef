#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "l2r/region_graph.hpp"
#include "l2r/road_network.hpp"

namespace l2r {

enum class RouteTag : std::uint8_t { SameRegion, InRegion, InOutRegion, OutRegion };
const std::string &route_tag_name(RouteTag t);

struct RouteResult {
  Path path;
  RouteTag tag = RouteTag::OutRegion;
};

// Greedy best-first search over region edges, keyed by centroid distance to
// the destination region; a direct edge to the destination short-circuits.
// Dead ends backtrack through the frontier. Returns the region-edge id
// sequence or throws NoPathError.
std::vector<std::uint32_t> route_region_graph(const RegionGraphModel &model,
                                              RegionId r_s, RegionId r_d);

// Maps a region-edge sequence back to a road path from entry_vertex to
// exit_vertex: per edge the most-traversed path (ties: lowest travel time),
// stitched inside regions by recorded inner paths or fastest paths.
Path expand_region_path(const RegionGraphModel &model, const RoadNetwork &net,
                        const std::vector<std::uint32_t> &region_path,
                        VertexId entry_vertex, VertexId exit_vertex);

// Unified query answering: same-region lookup, region-graph routing, or
// fastest-path probing toward regions when either endpoint is uncovered.
// `departure` selects nothing at this layer (models are built per time
// window); it is accepted for interface parity.
RouteResult route(const RegionGraphModel &model, const RoadNetwork &net,
                  VertexId s, VertexId d, std::int64_t departure = 0);

} // namespace l2r
