#pragma once

#include "l2r/apply_pref.hpp"
#include "l2r/clustering.hpp"
#include "l2r/region_graph.hpp"
#include "l2r/transfer.hpp"

namespace l2r {

// Clustering plus region-graph construction (T-edges, inner paths, B-edges).
RegionGraphModel build_region_model(const RoadNetwork &net,
                                    const std::vector<Trajectory> &train,
                                    ClusterStats *stats = nullptr);

struct PipelineParams {
  FeatureSpace features = FeatureSpace::standard();
  TransferParams transfer;
  PopulateOptions populate;
  unsigned threads = 0;
};

struct PipelineResult {
  std::size_t t_edges_learned = 0;
  TransferReport transfer_report;
  double learn_ms = 0;
  double populate_ms = 0;
};

// Steps 1-3: learn a preference per T-edge, transfer to B-edges through the
// similarity graph, and attach preference-routed paths to B-edges.
PipelineResult learn_transfer_populate(const RoadNetwork &net, RegionGraphModel &model,
                                       const PipelineParams &params);

} // namespace l2r
