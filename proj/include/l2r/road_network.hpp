#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "l2r/errors.hpp"

namespace l2r {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0xFFFFFFFFu;

// Six-level road classification, ordinal 1 (most major) .. 6 (most minor).
enum class RoadType : std::uint8_t {
  motorway = 1,
  trunk = 2,
  primary = 3,
  secondary = 4,
  tertiary = 5,
  residential = 6,
};
inline constexpr int kRoadTypeCount = 6;

int road_type_code(RoadType t);
RoadType road_type_from_code(int code);             // throws Error on bad code
const std::string &road_type_name(RoadType t);
RoadType road_type_from_name(const std::string &s); // throws Error on bad name

// Travel cost dimensions an edge can be weighted by.
enum class CostKind : std::uint8_t { DI = 0, TT = 1, FC = 2 };
inline constexpr int kCostKindCount = 3;
const std::string &cost_kind_name(CostKind k);
CostKind cost_kind_from_name(const std::string &s);

// Per-edge fuel model: liters = length_km * (a + b/v + c*v^2), v in km/h.
// Convex in v, so the frugal speed sits strictly between slow and fast roads.
struct FuelModel {
  double a = 0.17;
  double b = 2.1;
  double c = 0.000012;
  double liters(double length_m, double speed_kmh) const {
    const double v = speed_kmh;
    return (length_m / 1000.0) * (a + b / v + c * v * v);
  }
};

struct Vertex {
  std::int64_t original_id = 0;
  double lon = 0;
  double lat = 0;
};

struct Edge {
  std::int64_t original_id = 0;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  double length_m = 0;
  double speed_kmh = 0;
  RoadType type = RoadType::residential;
};

// Directed weighted road graph. Vertex/edge ids are dense indices assigned at
// construction; original ids are kept for I/O. Immutable once built.
class RoadNetwork {
public:
  RoadNetwork() = default;
  RoadNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges,
              FuelModel fuel = FuelModel{});

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Vertex &vertex(VertexId v) const;
  const Edge &edge(EdgeId e) const;
  const std::vector<Vertex> &vertices() const { return vertices_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const FuelModel &fuel_model() const { return fuel_; }

  const std::vector<EdgeId> &out_edges(VertexId v) const;
  const std::vector<EdgeId> &in_edges(VertexId v) const;

  // Lowest-id directed edge from u to v, if any.
  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

  std::optional<VertexId> vertex_by_original(std::int64_t original_id) const;

  double edge_weight(EdgeId e, CostKind kind) const; // strictly positive

private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::unordered_map<std::uint64_t, EdgeId> edge_by_pair_;
  std::unordered_map<std::int64_t, VertexId> vertex_by_original_;
  FuelModel fuel_;
};

// A connected vertex sequence with its resolved edge ids (|edges| == |vertices|-1).
struct Path {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  bool empty() const { return vertices.empty(); }
  VertexId source() const { return vertices.front(); }
  VertexId destination() const { return vertices.back(); }
  bool operator==(const Path &other) const { return vertices == other.vertices; }
};

// Resolves a vertex sequence into a Path; throws Error naming the first
// unknown vertex or disconnected pair.
Path validate_path(const RoadNetwork &net, const std::vector<VertexId> &vertex_ids);

double path_cost(const RoadNetwork &net, const Path &p, CostKind kind);

// A map-matched trip: the road-network path plus trip metadata.
struct Trajectory {
  std::int64_t traj_id = 0;
  std::int64_t driver_id = 0;
  std::int64_t departure = 0; // epoch seconds
  Path path;
};

} // namespace l2r
