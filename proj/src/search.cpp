#include "l2r/search.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

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

std::optional<Path> try_shortest_path(const RoadNetwork &net, VertexId s, VertexId d,
                                      CostKind kind) {
  if (s >= net.vertex_count() || d >= net.vertex_count())
    throw Error("unknown vertex in shortest-path query");
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
    for (EdgeId e : net.out_edges(top.v)) {
      const Edge &ed = net.edge(e);
      const double cand = top.cost + net.edge_weight(e, kind);
      if (cand < dist[ed.to]) {
        dist[ed.to] = cand;
        parent_edge[ed.to] = e;
        pq.push({cand, ed.to});
      }
    }
  }
  if (!settled[d]) return std::nullopt;
  Path p;
  VertexId cur = d;
  while (cur != s) {
    const Edge &ed = net.edge(parent_edge[cur]);
    p.vertices.push_back(cur);
    p.edges.push_back(parent_edge[cur]);
    cur = ed.from;
  }
  p.vertices.push_back(s);
  std::reverse(p.vertices.begin(), p.vertices.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

Path shortest_path(const RoadNetwork &net, VertexId s, VertexId d, CostKind kind) {
  auto p = try_shortest_path(net, s, d, kind);
  if (!p)
    throw NoPathError("no path from " + std::to_string(s) + " to " + std::to_string(d));
  return std::move(*p);
}

} // namespace l2r
