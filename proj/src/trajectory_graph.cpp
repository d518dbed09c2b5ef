#include "l2r/trajectory_graph.hpp"

#include <algorithm>

namespace l2r {

namespace {

std::uint64_t undirected_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Pooled type of the undirected segment: the most major type among the
// directed edges present between the pair.
RoadType pooled_type(const RoadNetwork &net, VertexId a, VertexId b) {
  int best = kRoadTypeCount + 1;
  if (auto e = net.find_edge(a, b)) best = std::min(best, road_type_code(net.edge(*e).type));
  if (auto e = net.find_edge(b, a)) best = std::min(best, road_type_code(net.edge(*e).type));
  return road_type_from_code(best);
}

} // namespace

std::uint64_t TrajectoryGraph::vertex_popularity(VertexId v) const {
  auto it = popularity_.find(v);
  return it == popularity_.end() ? 0 : it->second;
}

const std::vector<std::uint32_t> &TrajectoryGraph::incident_edges(VertexId v) const {
  static const std::vector<std::uint32_t> kEmpty;
  auto it = incident_.find(v);
  return it == incident_.end() ? kEmpty : it->second;
}

TrajectoryGraph TrajectoryGraph::build(const RoadNetwork &net,
                                       const std::vector<Trajectory> &trajectories) {
  TrajectoryGraph tg;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  for (const Trajectory &t : trajectories) {
    const auto &vs = t.path.vertices;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      const VertexId a = vs[i], b = vs[i + 1];
      const std::uint64_t key = undirected_key(a, b);
      auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(tg.edges_.size()));
      if (fresh) {
        TGEdge e;
        e.u = std::min(a, b);
        e.v = std::max(a, b);
        e.count = 0;
        e.type = pooled_type(net, a, b);
        tg.edges_.push_back(e);
      }
      tg.edges_[it->second].count += 1;
    }
  }
  for (std::uint32_t i = 0; i < tg.edges_.size(); ++i) {
    const TGEdge &e = tg.edges_[i];
    tg.incident_[e.u].push_back(i);
    tg.incident_[e.v].push_back(i);
    tg.popularity_[e.u] += e.count;
    tg.popularity_[e.v] += e.count;
    tg.total_ += e.count;
  }
  tg.vertices_.reserve(tg.incident_.size());
  for (const auto &[v, _] : tg.incident_) tg.vertices_.push_back(v);
  std::sort(tg.vertices_.begin(), tg.vertices_.end());
  return tg;
}

} // namespace l2r
