#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "l2r/region_graph.hpp"
#include "l2r/road_network.hpp"

namespace l2r {

inline constexpr const char *kModelFormatTag = "l2r-model/1";

// The single self-describing artifact: network, regions, region edges with
// paths and preferences, and the training trajectory ids used to build it.
struct ModelFile {
  RoadNetwork net;
  RegionGraphModel model;
  std::vector<std::int64_t> train_traj_ids; // sorted
  std::string fingerprint;                  // hash over network + training ids
};

std::string compute_fingerprint(const RoadNetwork &net,
                                const std::vector<std::int64_t> &train_traj_ids);

void save_model(const ModelFile &mf, const std::string &path);
ModelFile load_model(const std::string &path);

// Optional clustering dump: region ids, types, members, centroids.
std::string regions_to_json(const RoadNetwork &net, const std::vector<Region> &regions);

// Per region-edge preference dump with provenance.
std::string preferences_to_json(const RegionGraphModel &model);

} // namespace l2r
