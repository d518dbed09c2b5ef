#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "l2r/road_network.hpp"

namespace l2r {

// A road-condition constraint: a set of road types (usually one, sometimes a
// declared pair such as motorway+residential). Empty set means "no constraint".
struct SlaveSet {
  std::uint8_t mask = 0;

  static SlaveSet none() { return SlaveSet{}; }
  static SlaveSet of(RoadType t) { return SlaveSet{static_cast<std::uint8_t>(1u << (road_type_code(t) - 1))}; }
  static SlaveSet of(RoadType a, RoadType b) {
    SlaveSet s = of(a);
    s.mask |= of(b).mask;
    return s;
  }

  bool is_none() const { return mask == 0; }
  bool contains(RoadType t) const { return mask & (1u << (road_type_code(t) - 1)); }
  // Vacuously true for the empty constraint.
  bool satisfied_by(RoadType t) const { return is_none() || contains(t); }
  std::vector<RoadType> types() const;
  std::string name() const; // "none", "motorway", "motorway+residential", ...

  bool operator==(const SlaveSet &o) const { return mask == o.mask; }
};

// Two-dimensional routing preference: the travel cost being minimized plus an
// optional road-condition constraint.
struct PreferenceVector {
  CostKind master = CostKind::TT;
  SlaveSet slave;

  bool operator==(const PreferenceVector &o) const {
    return master == o.master && slave == o.slave;
  }
  std::string to_string() const;
};

// Ordered inventory of cost and road-condition features; fixes the columns of
// the seed/solution matrices and all argmax tie-breaks.
struct FeatureSpace {
  std::vector<CostKind> cost_features;
  std::vector<SlaveSet> road_features;

  static FeatureSpace standard(); // [DI,TT,FC] + six singleton road types, p = 9

  std::size_t p() const { return cost_features.size() + road_features.size(); }
  std::size_t master_column(CostKind k) const;             // throws if absent
  std::optional<std::size_t> slave_column(SlaveSet s) const; // nullopt for none
  std::string column_name(std::size_t col) const;
};

// A deduplicated path with the number of trajectories that traversed it.
// Synthetic entries (count 0) are produced by preference routing, not data.
struct WeightedPath {
  Path path;
  std::uint32_t count = 1;
  bool synthetic = false;
};

// Shared-length over truth-length (edge identity by directed edge id).
// Requires the truth path to carry at least one edge.
double psim_intersection(const RoadNetwork &net, const Path &truth, const Path &candidate);

// Shared-length over union-length. Requires at least one of the two paths to
// carry an edge.
double psim_union(const RoadNetwork &net, const Path &truth, const Path &candidate);

// Cost-minimal path under the master weight (plain label-settling search,
// deterministic tie-break by vertex id). Throws NoPathError if unreachable.
Path lowest_cost_path(const RoadNetwork &net, VertexId s, VertexId d, CostKind master);

struct LearnOptions {
  FeatureSpace features = FeatureSpace::standard();
};

// Two-stage preference learning for one T-edge path set: pick the cost feature
// whose lowest-cost paths best match the observed paths, then keep the
// road-condition feature only if it strictly improves the aggregate score.
PreferenceVector learn_preference(const RoadNetwork &net,
                                  const std::vector<WeightedPath> &paths,
                                  const LearnOptions &opts = {});

} // namespace l2r
