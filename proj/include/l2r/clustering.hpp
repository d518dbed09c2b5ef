#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "l2r/road_network.hpp"
#include "l2r/trajectory_graph.hpp"

namespace l2r {

using RegionId = std::uint32_t;
inline constexpr RegionId kNoRegion = 0xFFFFFFFFu;

// A cluster of trajectory-graph vertices. Non-singleton regions are road-type
// homogeneous; singletons carry no road type.
struct Region {
  RegionId id = kNoRegion;
  std::vector<VertexId> members; // sorted
  std::optional<RoadType> road_type;
  double centroid_lon = 0;
  double centroid_lat = 0;
};

// One executed merge, for auditing: both sides' shapes at qualification time,
// the gain, the connecting edge type, and the handles involved (the root
// handle persists through later merges, so log entries can be attributed to
// final regions by union-find).
struct MergeLogEntry {
  double gain = 0;
  std::uint32_t root_handle = 0;   // v_k
  std::uint32_t merged_handle = 0; // v_j
  bool k_aggregate = false;
  bool j_aggregate = false;
  RoadType k_rt = RoadType::residential; // valid when k_aggregate
  RoadType j_rt = RoadType::residential; // valid when j_aggregate
  RoadType edge_type = RoadType::residential;
};

struct ClusterStats {
  std::vector<MergeLogEntry> merges;
  std::size_t extractions = 0; // live priority-queue extractions
  std::size_t edge_cuts = 0;
  std::vector<std::uint32_t> region_handles; // final handle per returned region
};

// Agglomerative modularity clustering over a trajectory graph. Exposes the
// per-step primitives so they can be driven and checked in isolation; handles
// are indices into the evolving cluster-vertex set (initially one per
// trajectory-graph vertex, in sorted vertex order).
class BottomUpClusterer {
public:
  explicit BottomUpClusterer(const TrajectoryGraph &tg);

  std::size_t cluster_vertex_count() const { return verts_.size(); }
  bool is_aggregate(std::uint32_t h) const { return verts_[h].aggregate; }
  std::uint64_t popularity(std::uint32_t h) const { return verts_[h].popularity; }

  // s_kj/S - S_k*S_j/S^2 for adjacent handles, 0 for non-adjacent.
  double modularity_gain(std::uint32_t k, std::uint32_t j) const;

  // Positive gain plus the road-type condition for the simple/aggregate case mix.
  bool check_qualification(std::uint32_t k, std::uint32_t j) const;

  // Subset of qualified neighbors that actually merges: everything when k is
  // aggregate, else the largest road-type-uniform group (ties: lower ordinal).
  std::vector<std::uint32_t> select_merge(std::uint32_t k,
                                          const std::vector<std::uint32_t> &vb) const;

  std::vector<Region> run(ClusterStats *stats = nullptr);

  // Unconditional merge of j into k, bypassing qualification. Exists so tests
  // can build aggregate states and probe the condition table directly.
  void force_merge_for_test(std::uint32_t k, std::uint32_t j);

private:
  struct CVert {
    bool alive = true;
    bool aggregate = false;
    std::uint64_t popularity = 0;
    RoadType rt = RoadType::residential; // meaningful when aggregate
    std::vector<VertexId> members;
    VertexId min_member = kNoVertex;
    std::uint64_t generation = 0;
    // neighbor handle -> (pooled popularity, pooled road type)
    std::unordered_map<std::uint32_t, std::pair<std::uint64_t, RoadType>> nbrs;
  };

  bool gain_positive(std::uint32_t k, std::uint32_t j) const; // exact integer test
  void merge_into(std::uint32_t k, std::uint32_t j);

  std::uint64_t total_ = 0; // S, fixed at build time
  std::vector<CVert> verts_;
};

// Runs the full algorithm and finalizes regions (ids assigned by ascending
// minimum member id; centroids averaged over member coordinates).
std::vector<Region> bottom_up_clustering(const RoadNetwork &net, const TrajectoryGraph &tg,
                                         ClusterStats *stats = nullptr);

} // namespace l2r
