#include "l2r/router.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "l2r/geo.hpp"
#include "l2r/search.hpp"

namespace l2r {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

const std::string &route_tag_name(RouteTag t) {
  static const std::string names[] = {"SameRegion", "InRegion", "InOutRegion", "OutRegion"};
  return names[static_cast<int>(t)];
}

namespace {

bool edge_usable(const RegionEdge &e) { return !e.dead && !e.paths.empty(); }

double centroid_distance(const RegionGraphModel &model, RegionId a, RegionId b) {
  const Region &ra = model.nodes[a].region;
  const Region &rb = model.nodes[b].region;
  return distance_m(ra.centroid_lon, ra.centroid_lat, rb.centroid_lon, rb.centroid_lat);
}

} // namespace

std::vector<std::uint32_t> route_region_graph(const RegionGraphModel &model,
                                              RegionId r_s, RegionId r_d) {
  if (r_s == r_d) throw Error("region route requires distinct regions");
  if (r_s >= model.nodes.size() || r_d >= model.nodes.size())
    throw Error("unknown region in region route");

  struct Entry {
    double dist;
    RegionId region;
    bool operator>(const Entry &o) const {
      if (dist != o.dist) return dist > o.dist;
      return region > o.region;
    }
  };
  std::vector<char> visited(model.nodes.size(), 0);
  std::vector<std::uint32_t> parent_edge(model.nodes.size(), 0);
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> frontier;

  auto reconstruct = [&](RegionId last, std::uint32_t final_edge) {
    std::vector<std::uint32_t> seq;
    seq.push_back(final_edge);
    RegionId cur = last;
    while (cur != r_s) {
      seq.push_back(parent_edge[cur]);
      cur = model.edges[parent_edge[cur]].from;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  visited[r_s] = 1;
  RegionId current = r_s;
  while (true) {
    // a direct edge to the destination region wins outright
    if (const RegionEdge *direct = model.find_edge(current, r_d); direct && edge_usable(*direct))
      return reconstruct(current, direct->id);
    for (std::uint32_t eid : model.out_edges(current)) {
      const RegionEdge &e = model.edges[eid];
      if (!edge_usable(e) || visited[e.to]) continue;
      visited[e.to] = 1;
      parent_edge[e.to] = eid;
      frontier.push({centroid_distance(model, e.to, r_d), e.to});
    }
    if (frontier.empty())
      throw NoPathError("no route between regions " + std::to_string(r_s) + " and " +
                        std::to_string(r_d));
    current = frontier.top().region;
    frontier.pop();
    if (current == r_d) return reconstruct(model.edges[parent_edge[current]].from,
                                           parent_edge[current]);
  }
}

namespace {

// ranking used for both region-edge paths and inner connectors: most traversed
// first, then lowest travel time, then lexicographic for full determinism
const WeightedPath *pick_best(const RoadNetwork &net, const std::vector<WeightedPath> &paths) {
  const WeightedPath *best = nullptr;
  double best_tt = kInf;
  for (const WeightedPath &wp : paths) {
    if (!best) {
      best = &wp;
      best_tt = path_cost(net, wp.path, CostKind::TT);
      continue;
    }
    if (wp.count != best->count) {
      if (wp.count > best->count) {
        best = &wp;
        best_tt = path_cost(net, wp.path, CostKind::TT);
      }
      continue;
    }
    const double tt = path_cost(net, wp.path, CostKind::TT);
    if (tt < best_tt || (tt == best_tt && wp.path.vertices < best->path.vertices)) {
      best = &wp;
      best_tt = tt;
    }
  }
  return best;
}

const WeightedPath *find_inner(const RoadNetwork &net, const RegionNode &node,
                               VertexId a, VertexId b) {
  std::vector<WeightedPath> matching;
  for (const WeightedPath &wp : node.inner_paths)
    if (wp.path.source() == a && wp.path.destination() == b) matching.push_back(wp);
  if (matching.empty()) return nullptr;
  const WeightedPath *best = pick_best(net, matching);
  for (const WeightedPath &wp : node.inner_paths)
    if (wp.path == best->path && wp.count == best->count) return &wp;
  return nullptr;
}

void append_path(Path &acc, const Path &next) {
  if (acc.vertices.empty()) {
    acc = next;
    return;
  }
  if (acc.vertices.back() != next.vertices.front())
    throw Error("internal stitching discontinuity");
  acc.vertices.insert(acc.vertices.end(), next.vertices.begin() + 1, next.vertices.end());
  acc.edges.insert(acc.edges.end(), next.edges.begin(), next.edges.end());
}

// connector within one region: recorded inner path if any, else fastest path
Path connector(const RegionGraphModel &model, const RoadNetwork &net, RegionId region,
               VertexId a, VertexId b) {
  if (a == b) {
    Path p;
    p.vertices.push_back(a);
    return p;
  }
  if (const WeightedPath *inner = find_inner(net, model.nodes[region], a, b))
    return inner->path;
  if (auto p = try_shortest_path(net, a, b, CostKind::TT)) return *p;
  throw Error("cannot stitch a connection inside region " + std::to_string(region));
}

} // namespace

Path expand_region_path(const RegionGraphModel &model, const RoadNetwork &net,
                        const std::vector<std::uint32_t> &region_path,
                        VertexId entry_vertex, VertexId exit_vertex) {
  if (region_path.empty()) throw Error("empty region path");
  Path result;
  result.vertices.push_back(entry_vertex);
  VertexId current = entry_vertex;
  for (std::uint32_t eid : region_path) {
    const RegionEdge &e = model.edges[eid];
    const WeightedPath *chosen = pick_best(net, e.paths);
    if (!chosen)
      throw Error("region edge " + std::to_string(eid) + " carries no paths");
    if (current != chosen->path.source())
      append_path(result, connector(model, net, e.from, current, chosen->path.source()));
    append_path(result, chosen->path);
    current = chosen->path.destination();
  }
  const RegionId last_region = model.edges[region_path.back()].to;
  if (current != exit_vertex)
    append_path(result, connector(model, net, last_region, current, exit_vertex));
  return result;
}

namespace {

struct ProbeHit {
  VertexId vertex;
  Path path; // from the query endpoint to (or from) the hit vertex
};

// Fastest-path search from s; returns the first settled vertex inside any
// region, or nullopt when d settles first (no candidate region on the way).
std::optional<ProbeHit> probe(const RoadNetwork &net, const RegionGraphModel &model,
                              VertexId start, VertexId other, bool backward) {
  std::vector<double> dist(net.vertex_count(), kInf);
  std::vector<EdgeId> parent(net.vertex_count(), 0);
  std::vector<bool> settled(net.vertex_count(), false);
  struct QE {
    double cost;
    VertexId v;
    bool operator>(const QE &o) const {
      if (cost != o.cost) return cost > o.cost;
      return v > o.v;
    }
  };
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  dist[start] = 0;
  pq.push({0, start});
  while (!pq.empty()) {
    const QE top = pq.top();
    pq.pop();
    if (settled[top.v]) continue;
    settled[top.v] = true;
    if (model.region_of_vertex(top.v) != kNoRegion) {
      ProbeHit hit;
      hit.vertex = top.v;
      VertexId cur = top.v;
      while (cur != start) {
        const Edge &ed = net.edge(parent[cur]);
        hit.path.vertices.push_back(cur);
        hit.path.edges.push_back(parent[cur]);
        cur = backward ? ed.to : ed.from;
      }
      hit.path.vertices.push_back(start);
      if (!backward) {
        std::reverse(hit.path.vertices.begin(), hit.path.vertices.end());
        std::reverse(hit.path.edges.begin(), hit.path.edges.end());
      }
      return hit;
    }
    if (top.v == other) return std::nullopt;
    const auto &edges = backward ? net.in_edges(top.v) : net.out_edges(top.v);
    for (EdgeId e : edges) {
      const Edge &ed = net.edge(e);
      const VertexId w = backward ? ed.from : ed.to;
      const double cand = top.cost + net.edge_weight(e, CostKind::TT);
      if (cand < dist[w]) {
        dist[w] = cand;
        parent[w] = e;
        pq.push({cand, w});
      }
    }
  }
  return std::nullopt; // other endpoint unreachable too; caller surfaces it
}

} // namespace

RouteResult route(const RegionGraphModel &model, const RoadNetwork &net,
                  VertexId s, VertexId d, std::int64_t departure) {
  (void)departure; // time windows select the model, not the query path
  if (s >= net.vertex_count() || d >= net.vertex_count())
    throw Error("unknown vertex in routing query");
  const RegionId rs = model.region_of_vertex(s);
  const RegionId rd = model.region_of_vertex(d);

  RouteTag outside_tag =
      (rs == kNoRegion && rd == kNoRegion) ? RouteTag::OutRegion : RouteTag::InOutRegion;

  if (s == d) {
    Path p;
    p.vertices.push_back(s);
    return {p, rs != kNoRegion && rs == rd ? RouteTag::SameRegion : outside_tag};
  }

  if (rs != kNoRegion && rd != kNoRegion) {
    if (rs == rd) {
      if (const WeightedPath *inner = find_inner(net, model.nodes[rs], s, d))
        return {inner->path, RouteTag::SameRegion};
      return {shortest_path(net, s, d, CostKind::TT), RouteTag::SameRegion};
    }
    const auto seq = route_region_graph(model, rs, rd);
    return {expand_region_path(model, net, seq, s, d), RouteTag::InRegion};
  }

  // at least one endpoint is outside every region: probe toward regions along
  // fastest paths, fall back to the plain fastest path
  auto fwd = probe(net, model, s, d, false);
  if (!fwd) return {shortest_path(net, s, d, CostKind::TT), outside_tag};
  auto bwd = probe(net, model, d, s, true);
  if (!bwd) return {shortest_path(net, s, d, CostKind::TT), outside_tag};

  const RegionId r_s = model.region_of_vertex(fwd->vertex);
  const RegionId r_d = model.region_of_vertex(bwd->vertex);
  if (r_s == r_d) return {shortest_path(net, s, d, CostKind::TT), outside_tag};

  const auto seq = route_region_graph(model, r_s, r_d);
  Path mid = expand_region_path(model, net, seq, fwd->vertex, bwd->vertex);
  Path full = fwd->path;
  append_path(full, mid);
  append_path(full, bwd->path);
  return {full, outside_tag};
}

} // namespace l2r
