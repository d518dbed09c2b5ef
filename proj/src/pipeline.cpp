#include "l2r/pipeline.hpp"

#include <chrono>

#include "l2r/parallel.hpp"
#include "l2r/trajectory_graph.hpp"

namespace l2r {

RegionGraphModel build_region_model(const RoadNetwork &net,
                                    const std::vector<Trajectory> &train,
                                    ClusterStats *stats) {
  const TrajectoryGraph tg = build_trajectory_graph(net, train);
  const std::vector<Region> regions = bottom_up_clustering(net, tg, stats);
  RegionGraphModel model = build_t_edges(net, regions, train);
  build_b_edges(net, model);
  return model;
}

PipelineResult learn_transfer_populate(const RoadNetwork &net, RegionGraphModel &model,
                                       const PipelineParams &params) {
  PipelineResult result;
  using clock = std::chrono::steady_clock;

  const auto t0 = clock::now();
  std::vector<std::uint32_t> t_edges;
  for (const RegionEdge &e : model.edges)
    if (e.kind == RegionEdgeKind::T) t_edges.push_back(e.id);
  LearnOptions lopts;
  lopts.features = params.features;
  parallel_for(t_edges.size(), params.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RegionEdge &e = model.edges[t_edges[i]];
      e.preference = learn_preference(net, e.paths, lopts);
      e.pref_source = PreferenceSource::Learned;
    }
  });
  result.t_edges_learned = t_edges.size();
  result.learn_ms =
      std::chrono::duration<double, std::milli>(clock::now() - t0).count();

  TransferParams tparams = params.transfer;
  if (tparams.threads == 0) tparams.threads = params.threads;
  result.transfer_report = transfer_preferences(net, model, params.features, tparams);

  const auto t1 = clock::now();
  PopulateOptions popts = params.populate;
  if (popts.threads == 0) popts.threads = params.threads;
  populate_b_edge_paths(net, model, popts);
  result.populate_ms =
      std::chrono::duration<double, std::milli>(clock::now() - t1).count();
  return result;
}

} // namespace l2r
