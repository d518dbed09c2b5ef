#include "l2r/road_network.hpp"

#include <array>
#include <algorithm>

namespace l2r {

namespace {

const std::array<std::string, kRoadTypeCount> kRoadTypeNames = {
    "motorway", "trunk", "primary", "secondary", "tertiary", "residential"};

const std::array<std::string, kCostKindCount> kCostKindNames = {"DI", "TT", "FC"};

std::uint64_t pair_key(VertexId u, VertexId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

} // namespace

int road_type_code(RoadType t) { return static_cast<int>(t); }

RoadType road_type_from_code(int code) {
  if (code < 1 || code > kRoadTypeCount)
    throw Error("road type code out of range: " + std::to_string(code));
  return static_cast<RoadType>(code);
}

const std::string &road_type_name(RoadType t) {
  return kRoadTypeNames[static_cast<int>(t) - 1];
}

RoadType road_type_from_name(const std::string &s) {
  for (int i = 0; i < kRoadTypeCount; ++i)
    if (kRoadTypeNames[i] == s) return static_cast<RoadType>(i + 1);
  throw Error("unknown road type: '" + s + "'");
}

const std::string &cost_kind_name(CostKind k) {
  return kCostKindNames[static_cast<int>(k)];
}

CostKind cost_kind_from_name(const std::string &s) {
  for (int i = 0; i < kCostKindCount; ++i)
    if (kCostKindNames[i] == s) return static_cast<CostKind>(i);
  throw Error("unknown cost kind: '" + s + "'");
}

RoadNetwork::RoadNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges,
                         FuelModel fuel)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), fuel_(fuel) {
  out_.resize(vertices_.size());
  in_.resize(vertices_.size());
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge &ed = edges_[e];
    if (ed.from >= vertices_.size() || ed.to >= vertices_.size())
      throw Error("edge " + std::to_string(e) + " references unknown vertex");
    if (!(ed.length_m > 0))
      throw Error("edge " + std::to_string(e) + " has nonpositive length");
    if (!(ed.speed_kmh > 0))
      throw Error("edge " + std::to_string(e) + " has nonpositive speed");
    out_[ed.from].push_back(e);
    in_[ed.to].push_back(e);
    edge_by_pair_.try_emplace(pair_key(ed.from, ed.to), e);
  }
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    vertex_by_original_.try_emplace(vertices_[v].original_id, v);
  }
}

const Vertex &RoadNetwork::vertex(VertexId v) const {
  if (v >= vertices_.size())
    throw Error("unknown vertex id " + std::to_string(v));
  return vertices_[v];
}

const Edge &RoadNetwork::edge(EdgeId e) const {
  if (e >= edges_.size()) throw Error("unknown edge id " + std::to_string(e));
  return edges_[e];
}

const std::vector<EdgeId> &RoadNetwork::out_edges(VertexId v) const {
  if (v >= vertices_.size())
    throw Error("unknown vertex id " + std::to_string(v));
  return out_[v];
}

const std::vector<EdgeId> &RoadNetwork::in_edges(VertexId v) const {
  if (v >= vertices_.size())
    throw Error("unknown vertex id " + std::to_string(v));
  return in_[v];
}

std::optional<EdgeId> RoadNetwork::find_edge(VertexId u, VertexId v) const {
  auto it = edge_by_pair_.find(pair_key(u, v));
  if (it == edge_by_pair_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> RoadNetwork::vertex_by_original(std::int64_t original_id) const {
  auto it = vertex_by_original_.find(original_id);
  if (it == vertex_by_original_.end()) return std::nullopt;
  return it->second;
}

double RoadNetwork::edge_weight(EdgeId e, CostKind kind) const {
  const Edge &ed = edge(e);
  switch (kind) {
  case CostKind::DI:
    return ed.length_m;
  case CostKind::TT:
    return ed.length_m / (ed.speed_kmh / 3.6); // seconds
  case CostKind::FC:
    return fuel_.liters(ed.length_m, ed.speed_kmh);
  }
  throw Error("bad cost kind");
}

Path validate_path(const RoadNetwork &net, const std::vector<VertexId> &vertex_ids) {
  if (vertex_ids.empty()) throw Error("empty vertex sequence");
  Path p;
  p.vertices = vertex_ids;
  p.edges.reserve(vertex_ids.size() - 1);
  for (std::size_t i = 0; i < vertex_ids.size(); ++i) {
    if (vertex_ids[i] >= net.vertex_count())
      throw Error("unknown vertex " + std::to_string(vertex_ids[i]));
    if (i + 1 < vertex_ids.size()) {
      auto e = net.find_edge(vertex_ids[i], vertex_ids[i + 1]);
      if (!e)
        throw Error("no edge " + std::to_string(vertex_ids[i]) + "->" +
                    std::to_string(vertex_ids[i + 1]));
      p.edges.push_back(*e);
    }
  }
  return p;
}

double path_cost(const RoadNetwork &net, const Path &p, CostKind kind) {
  double total = 0;
  for (EdgeId e : p.edges) total += net.edge_weight(e, kind);
  return total;
}

} // namespace l2r
