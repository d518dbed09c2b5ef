#include "l2r/clustering.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace l2r {

namespace {

// Pooling rule for parallel edges produced by contraction: the constituent
// with the higher popularity keeps its type, ties going to the more major type.
std::pair<std::uint64_t, RoadType> pool_edges(std::pair<std::uint64_t, RoadType> a,
                                              std::pair<std::uint64_t, RoadType> b) {
  RoadType t;
  if (a.first > b.first) t = a.second;
  else if (b.first > a.first) t = b.second;
  else t = road_type_code(a.second) <= road_type_code(b.second) ? a.second : b.second;
  return {a.first + b.first, t};
}

struct PQEntry {
  std::uint64_t popularity;
  VertexId min_member;
  std::uint32_t handle;
  std::uint64_t generation;
};

struct PQLess {
  // max-heap: higher popularity first, then smaller minimum member id
  bool operator()(const PQEntry &a, const PQEntry &b) const {
    if (a.popularity != b.popularity) return a.popularity < b.popularity;
    return a.min_member > b.min_member;
  }
};

} // namespace

BottomUpClusterer::BottomUpClusterer(const TrajectoryGraph &tg) {
  total_ = tg.total_popularity();
  std::unordered_map<VertexId, std::uint32_t> handle;
  handle.reserve(tg.vertices().size());
  verts_.reserve(tg.vertices().size());
  for (VertexId v : tg.vertices()) {
    CVert cv;
    cv.popularity = tg.vertex_popularity(v);
    cv.members = {v};
    cv.min_member = v;
    handle.emplace(v, static_cast<std::uint32_t>(verts_.size()));
    verts_.push_back(std::move(cv));
  }
  for (const auto &e : tg.edges()) {
    const std::uint32_t hu = handle[e.u], hv = handle[e.v];
    verts_[hu].nbrs[hv] = {e.count, e.type};
    verts_[hv].nbrs[hu] = {e.count, e.type};
  }
}

bool BottomUpClusterer::gain_positive(std::uint32_t k, std::uint32_t j) const {
  auto it = verts_[k].nbrs.find(j);
  if (it == verts_[k].nbrs.end()) return false;
  // s_kj/S > S_k*S_j/S^2  <=>  s_kj*S > S_k*S_j, compared exactly in integers
  const unsigned __int128 lhs =
      static_cast<unsigned __int128>(it->second.first) * total_;
  const unsigned __int128 rhs = static_cast<unsigned __int128>(verts_[k].popularity) *
                                verts_[j].popularity;
  return lhs > rhs;
}

double BottomUpClusterer::modularity_gain(std::uint32_t k, std::uint32_t j) const {
  if (k == j) throw Error("modularity gain of a vertex with itself is undefined");
  auto it = verts_[k].nbrs.find(j);
  if (it == verts_[k].nbrs.end()) return 0.0;
  const double s = static_cast<double>(it->second.first);
  const double big_s = static_cast<double>(total_);
  const double sk = static_cast<double>(verts_[k].popularity);
  const double sj = static_cast<double>(verts_[j].popularity);
  return s / big_s - (sk * sj) / (big_s * big_s);
}

bool BottomUpClusterer::check_qualification(std::uint32_t k, std::uint32_t j) const {
  auto it = verts_[k].nbrs.find(j);
  if (it == verts_[k].nbrs.end()) return false;
  if (!gain_positive(k, j)) return false;
  const RoadType edge_rt = it->second.second;
  const CVert &vk = verts_[k];
  const CVert &vj = verts_[j];
  if (!vk.aggregate && !vj.aggregate) return true;
  if (vk.aggregate && !vj.aggregate) return vk.rt == edge_rt;
  if (!vk.aggregate && vj.aggregate) return vj.rt == edge_rt;
  return vk.rt == vj.rt;
}

std::vector<std::uint32_t> BottomUpClusterer::select_merge(
    std::uint32_t k, const std::vector<std::uint32_t> &vb) const {
  std::vector<std::uint32_t> out;
  if (vb.empty()) return out;
  if (verts_[k].aggregate) {
    out = vb;
  } else {
    // largest group of neighbors whose connecting edges share a road type;
    // ties resolved toward the more major type
    std::map<RoadType, std::vector<std::uint32_t>> groups;
    for (std::uint32_t j : vb) {
      groups[verts_[k].nbrs.at(j).second].push_back(j);
    }
    const std::vector<std::uint32_t> *best = nullptr;
    for (const auto &[rt, members] : groups) {
      if (!best || members.size() > best->size()) best = &members; // map order = ordinal order
    }
    out = *best;
  }
  std::sort(out.begin(), out.end(), [this](std::uint32_t a, std::uint32_t b) {
    return verts_[a].min_member < verts_[b].min_member;
  });
  return out;
}

void BottomUpClusterer::merge_into(std::uint32_t k, std::uint32_t j) {
  CVert &vk = verts_[k];
  CVert &vj = verts_[j];
  const RoadType shared_rt = vk.nbrs.at(j).second;
  if (!vk.aggregate) vk.rt = vj.aggregate ? vj.rt : shared_rt;
  vk.aggregate = true;
  vk.popularity += vj.popularity;
  vk.members.insert(vk.members.end(), vj.members.begin(), vj.members.end());
  vk.min_member = std::min(vk.min_member, vj.min_member);
  vk.nbrs.erase(j);
  for (const auto &[x, exj] : vj.nbrs) {
    if (x == k) continue;
    verts_[x].nbrs.erase(j);
    auto it = vk.nbrs.find(x);
    if (it == vk.nbrs.end()) {
      vk.nbrs.emplace(x, exj);
      verts_[x].nbrs.emplace(k, exj);
    } else {
      it->second = pool_edges(it->second, exj);
      verts_[x].nbrs[k] = it->second;
    }
  }
  vj.nbrs.clear();
  vj.alive = false;
}

void BottomUpClusterer::force_merge_for_test(std::uint32_t k, std::uint32_t j) {
  merge_into(k, j);
}

std::vector<Region> BottomUpClusterer::run(ClusterStats *stats) {
  std::priority_queue<PQEntry, std::vector<PQEntry>, PQLess> pq;
  for (std::uint32_t h = 0; h < verts_.size(); ++h) {
    pq.push({verts_[h].popularity, verts_[h].min_member, h, verts_[h].generation});
  }
  std::vector<std::uint32_t> finalized;
  while (!pq.empty()) {
    const PQEntry top = pq.top();
    pq.pop();
    CVert &vk = verts_[top.handle];
    if (!vk.alive || top.generation != vk.generation) continue;
    if (stats) stats->extractions += 1;

    if (vk.nbrs.empty()) {
      vk.alive = false;
      finalized.push_back(top.handle);
      continue;
    }

    std::vector<std::uint32_t> va;
    va.reserve(vk.nbrs.size());
    for (const auto &[j, _] : vk.nbrs) va.push_back(j);
    std::sort(va.begin(), va.end());

    std::vector<std::uint32_t> vb;
    for (std::uint32_t j : va)
      if (check_qualification(top.handle, j)) vb.push_back(j);
    const std::vector<std::uint32_t> selected = select_merge(top.handle, vb);

    // cut everything adjacent that was not selected
    for (std::uint32_t j : va) {
      if (std::find(selected.begin(), selected.end(), j) != selected.end()) continue;
      vk.nbrs.erase(j);
      verts_[j].nbrs.erase(top.handle);
      if (stats) stats->edge_cuts += 1;
    }

    // gains are logged at qualification time: the whole batch was qualified
    // against the pre-merge vertex
    std::vector<MergeLogEntry> batch;
    if (stats) {
      for (std::uint32_t j : selected) {
        MergeLogEntry le;
        le.gain = modularity_gain(top.handle, j);
        le.root_handle = top.handle;
        le.merged_handle = j;
        le.k_aggregate = vk.aggregate;
        le.j_aggregate = verts_[j].aggregate;
        le.k_rt = vk.rt;
        le.j_rt = verts_[j].rt;
        le.edge_type = vk.nbrs.at(j).second;
        batch.push_back(le);
      }
    }

    for (std::uint32_t j : selected) merge_into(top.handle, j);
    if (stats)
      stats->merges.insert(stats->merges.end(), batch.begin(), batch.end());

    vk.generation += 1;
    pq.push({vk.popularity, vk.min_member, top.handle, vk.generation});
  }

  std::sort(finalized.begin(), finalized.end(), [this](std::uint32_t a, std::uint32_t b) {
    return verts_[a].min_member < verts_[b].min_member;
  });
  std::vector<Region> regions;
  regions.reserve(finalized.size());
  for (std::uint32_t h : finalized) {
    Region r;
    r.id = static_cast<RegionId>(regions.size());
    r.members = verts_[h].members;
    std::sort(r.members.begin(), r.members.end());
    if (verts_[h].aggregate) r.road_type = verts_[h].rt;
    if (stats) stats->region_handles.push_back(h);
    regions.push_back(std::move(r));
  }
  return regions;
}

std::vector<Region> bottom_up_clustering(const RoadNetwork &net, const TrajectoryGraph &tg,
                                         ClusterStats *stats) {
  BottomUpClusterer clusterer(tg);
  std::vector<Region> regions = clusterer.run(stats);
  for (Region &r : regions) {
    double lon = 0, lat = 0;
    for (VertexId v : r.members) {
      lon += net.vertex(v).lon;
      lat += net.vertex(v).lat;
    }
    r.centroid_lon = lon / static_cast<double>(r.members.size());
    r.centroid_lat = lat / static_cast<double>(r.members.size());
  }
  return regions;
}

} // namespace l2r
