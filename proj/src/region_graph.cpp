#include "l2r/region_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace l2r {

namespace {

std::uint64_t pair_key(RegionId a, RegionId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Maximal runs of consecutive trajectory vertices inside one region.
struct Span {
  RegionId region;
  std::size_t begin; // index into the trajectory path, inclusive
  std::size_t end;   // inclusive
};

std::vector<Span> region_spans(const std::vector<RegionId> &region_of, const Path &path) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < path.vertices.size(); ++i) {
    const RegionId r = region_of[path.vertices[i]];
    if (r == kNoRegion) continue;
    if (!spans.empty() && spans.back().region == r && spans.back().end + 1 == i) {
      spans.back().end = i;
    } else {
      spans.push_back({r, i, i});
    }
  }
  return spans;
}

Path slice_path(const Path &p, std::size_t begin, std::size_t end) {
  Path out;
  out.vertices.assign(p.vertices.begin() + begin, p.vertices.begin() + end + 1);
  if (end > begin)
    out.edges.assign(p.edges.begin() + begin, p.edges.begin() + end);
  return out;
}

void add_weighted_path(std::vector<WeightedPath> &set, Path p, std::uint32_t count) {
  for (WeightedPath &wp : set) {
    if (wp.path == p) {
      wp.count += count;
      return;
    }
  }
  set.push_back({std::move(p), count, false});
}

std::vector<RegionId> index_regions(const std::vector<Region> &regions,
                                    std::size_t vertex_count) {
  std::vector<RegionId> region_of(vertex_count, kNoRegion);
  for (const Region &r : regions)
    for (VertexId v : r.members) region_of[v] = r.id;
  return region_of;
}

} // namespace

const RegionEdge *RegionGraphModel::find_edge(RegionId from, RegionId to) const {
  auto it = edge_by_pair_.find(pair_key(from, to));
  return it == edge_by_pair_.end() ? nullptr : &edges[it->second];
}

RegionEdge *RegionGraphModel::find_edge(RegionId from, RegionId to) {
  auto it = edge_by_pair_.find(pair_key(from, to));
  return it == edge_by_pair_.end() ? nullptr : &edges[it->second];
}

const std::vector<std::uint32_t> &RegionGraphModel::out_edges(RegionId r) const {
  static const std::vector<std::uint32_t> kEmpty;
  return r < out_by_region_.size() ? out_by_region_[r] : kEmpty;
}

void RegionGraphModel::add_edge(RegionEdge e) {
  e.id = static_cast<std::uint32_t>(edges.size());
  edge_by_pair_.emplace(pair_key(e.from, e.to), e.id);
  if (out_by_region_.size() < nodes.size()) out_by_region_.resize(nodes.size());
  out_by_region_[e.from].push_back(e.id);
  edges.push_back(std::move(e));
}

void RegionGraphModel::rebuild_indexes() {
  edge_by_pair_.clear();
  out_by_region_.assign(nodes.size(), {});
  for (const RegionEdge &e : edges) {
    edge_by_pair_.emplace(pair_key(e.from, e.to), e.id);
    out_by_region_[e.from].push_back(e.id);
  }
}

std::vector<std::vector<WeightedPath>> extract_inner_paths(
    const std::vector<Region> &regions, const std::vector<Trajectory> &trajectories,
    std::size_t vertex_count) {
  const std::vector<RegionId> region_of = index_regions(regions, vertex_count);
  std::vector<std::vector<WeightedPath>> inner(regions.size());
  for (const Trajectory &t : trajectories) {
    for (const Span &sp : region_spans(region_of, t.path)) {
      add_weighted_path(inner[sp.region], slice_path(t.path, sp.begin, sp.end), 1);
    }
  }
  return inner;
}

RegionGraphModel build_t_edges(const RoadNetwork &net, const std::vector<Region> &regions,
                               const std::vector<Trajectory> &trajectories) {
  RegionGraphModel model;
  model.region_of = index_regions(regions, net.vertex_count());
  model.nodes.resize(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) model.nodes[i].region = regions[i];

  std::map<std::pair<VertexId, RegionId>, std::uint32_t> center_counts;
  std::map<std::pair<RegionId, RegionId>, std::vector<WeightedPath>> t_paths;

  for (const Trajectory &t : trajectories) {
    const std::vector<Span> spans = region_spans(model.region_of, t.path);
    for (const Span &sp : spans) {
      center_counts[{t.path.vertices[sp.begin], sp.region}] += 1;
      if (sp.end != sp.begin) center_counts[{t.path.vertices[sp.end], sp.region}] += 1;
    }
    // distinct regions in first-entry order
    std::vector<RegionId> order;
    std::vector<std::size_t> first_span; // index into spans
    for (std::size_t si = 0; si < spans.size(); ++si) {
      if (std::find(order.begin(), order.end(), spans[si].region) == order.end()) {
        order.push_back(spans[si].region);
        first_span.push_back(si);
      }
    }
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        // leave r_a at the last exit before r_b is first entered
        const std::size_t b_begin = spans[first_span[b]].begin;
        std::size_t exit_idx = 0;
        bool found = false;
        for (const Span &sp : spans) {
          if (sp.region == order[a] && sp.end < b_begin) {
            exit_idx = sp.end;
            found = true;
          }
        }
        if (!found) continue; // r_a first entered inside/after r_b's first visit
        add_weighted_path(t_paths[{order[a], order[b]}],
                          slice_path(t.path, exit_idx, spans[first_span[b]].begin), 1);
      }
    }
  }

  for (auto &[key, paths] : t_paths) {
    RegionEdge e;
    e.from = key.first;
    e.to = key.second;
    e.kind = RegionEdgeKind::T;
    e.paths = std::move(paths);
    model.add_edge(std::move(e));
  }
  for (const auto &[key, count] : center_counts) {
    model.nodes[key.second].centers.push_back({key.first, count});
  }

  auto inner = extract_inner_paths(regions, trajectories, net.vertex_count());
  for (std::size_t i = 0; i < regions.size(); ++i)
    model.nodes[i].inner_paths = std::move(inner[i]);

  return model;
}

void build_b_edges(const RoadNetwork &net, RegionGraphModel &model) {
  const std::size_t nregions = model.nodes.size();
  std::vector<char> visited(net.vertex_count());
  for (RegionId i = 0; i < nregions; ++i) {
    std::fill(visited.begin(), visited.end(), 0);
    std::deque<VertexId> queue;
    for (VertexId v : model.nodes[i].region.members) {
      visited[v] = 1;
      queue.push_back(v);
    }
    std::vector<RegionId> reached;
    while (!queue.empty()) {
      const VertexId u = queue.front();
      queue.pop_front();
      const RegionId ru = model.region_of[u];
      if (ru != kNoRegion && ru != i) {
        reached.push_back(ru); // stop: do not leak into further regions
        continue;
      }
      // reachability search: both orientations are explored
      for (EdgeId e : net.out_edges(u)) {
        const VertexId w = net.edge(e).to;
        if (!visited[w]) visited[w] = 1, queue.push_back(w);
      }
      for (EdgeId e : net.in_edges(u)) {
        const VertexId w = net.edge(e).from;
        if (!visited[w]) visited[w] = 1, queue.push_back(w);
      }
    }
    std::sort(reached.begin(), reached.end());
    reached.erase(std::unique(reached.begin(), reached.end()), reached.end());
    for (RegionId j : reached) {
      if (model.find_edge(i, j) || model.find_edge(j, i)) continue;
      RegionEdge fwd;
      fwd.from = i;
      fwd.to = j;
      fwd.kind = RegionEdgeKind::B;
      model.add_edge(std::move(fwd));
      RegionEdge rev;
      rev.from = j;
      rev.to = i;
      rev.kind = RegionEdgeKind::B;
      model.add_edge(std::move(rev));
    }
  }
}

bool region_graph_connected(const RegionGraphModel &model) {
  const std::size_t n = model.nodes.size();
  if (n <= 1) return true;
  std::vector<std::uint32_t> parent(n);
  for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const RegionEdge &e : model.edges) {
    const std::uint32_t a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[a] = b;
      components -= 1;
    }
  }
  return components == 1;
}

} // namespace l2r
