#include "l2r/apply_pref.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "l2r/geo.hpp"
#include "l2r/parallel.hpp"

namespace l2r {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct QEntry {
  double cost;
  VertexId v;
  bool operator>(const QEntry &o) const {
    if (cost != o.cost) return cost > o.cost;
    return v > o.v;
  }
};
} // namespace

Path preference_dijkstra(const RoadNetwork &net, const PreferenceVector &pref,
                         VertexId s, VertexId d) {
  if (s >= net.vertex_count() || d >= net.vertex_count())
    throw Error("unknown vertex in preference routing query");
  if (s == d) {
    Path p;
    p.vertices.push_back(s);
    return p;
  }
  std::vector<double> dist(net.vertex_count(), kInf);
  std::vector<EdgeId> parent_edge(net.vertex_count(), 0);
  std::vector<bool> settled(net.vertex_count(), false);
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> pq;
  dist[s] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    const QEntry top = pq.top();
    pq.pop();
    if (settled[top.v]) continue;
    settled[top.v] = true;
    if (top.v == d) break;
    // when any outgoing edge matches the slave constraint, only matching
    // edges leave this vertex; otherwise every edge is considered
    bool any_sat = false;
    for (EdgeId e : net.out_edges(top.v)) {
      if (pref.slave.satisfied_by(net.edge(e).type)) {
        any_sat = true;
        break;
      }
    }
    for (EdgeId e : net.out_edges(top.v)) {
      const Edge &ed = net.edge(e);
      if (any_sat && !pref.slave.satisfied_by(ed.type)) continue;
      const double cand = top.cost + net.edge_weight(e, pref.master);
      if (cand < dist[ed.to]) {
        dist[ed.to] = cand;
        parent_edge[ed.to] = e;
        pq.push({cand, ed.to});
      }
    }
  }
  if (!settled[d])
    throw NoPathError("no preference-respecting path from " + std::to_string(s) + " to " +
                      std::to_string(d) + " under " + pref.to_string());
  Path p;
  VertexId cur = d;
  while (cur != s) {
    p.vertices.push_back(cur);
    p.edges.push_back(parent_edge[cur]);
    cur = net.edge(parent_edge[cur]).from;
  }
  p.vertices.push_back(s);
  std::reverse(p.vertices.begin(), p.vertices.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

namespace {

std::vector<TransferCenter> centers_or_surrogate(const RoadNetwork &net,
                                                 const RegionNode &node) {
  if (!node.centers.empty()) return node.centers;
  // fall back to the member closest to the centroid
  VertexId best = node.region.members.front();
  double best_d = kInf;
  for (VertexId v : node.region.members) {
    const Vertex &vx = net.vertex(v);
    const double d =
        distance_m(vx.lon, vx.lat, node.region.centroid_lon, node.region.centroid_lat);
    if (d < best_d || (d == best_d && v < best)) {
      best_d = d;
      best = v;
    }
  }
  return {{best, 0}};
}

void sort_by_popularity(std::vector<TransferCenter> &cs) {
  std::sort(cs.begin(), cs.end(), [](const TransferCenter &a, const TransferCenter &b) {
    if (a.traj_count != b.traj_count) return a.traj_count > b.traj_count;
    return a.vertex < b.vertex;
  });
}

} // namespace

void populate_b_edge_paths(const RoadNetwork &net, RegionGraphModel &model,
                           const PopulateOptions &opts) {
  std::vector<std::uint32_t> b_edges;
  for (const RegionEdge &e : model.edges)
    if (e.kind == RegionEdgeKind::B) b_edges.push_back(e.id);

  parallel_for(b_edges.size(), opts.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RegionEdge &edge = model.edges[b_edges[i]];
      std::vector<TransferCenter> from = centers_or_surrogate(net, model.nodes[edge.from]);
      std::vector<TransferCenter> to = centers_or_surrogate(net, model.nodes[edge.to]);
      sort_by_popularity(from);
      sort_by_popularity(to);
      // keep the most popular centers when the pair product explodes
      while (from.size() * to.size() > std::max<std::size_t>(1, opts.max_center_pairs) &&
             from.size() + to.size() > 2) {
        if (from.size() >= to.size()) from.pop_back();
        else to.pop_back();
      }
      const PreferenceVector pref =
          edge.preference.value_or(PreferenceVector{CostKind::TT, SlaveSet::none()});
      edge.paths.clear();
      for (const TransferCenter &a : from) {
        for (const TransferCenter &b : to) {
          try {
            Path p = preference_dijkstra(net, pref, a.vertex, b.vertex);
            edge.paths.push_back({std::move(p), 0, true});
          } catch (const NoPathError &) {
            // unreachable pair: dropped
          }
        }
      }
      edge.dead = edge.paths.empty();
    }
  });
}

} // namespace l2r
