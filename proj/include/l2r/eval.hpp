#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "l2r/region_graph.hpp"
#include "l2r/road_network.hpp"

namespace l2r {

// departure < boundary goes to train, >= boundary to test; order preserved.
std::pair<std::vector<Trajectory>, std::vector<Trajectory>> split_train_test(
    const std::vector<Trajectory> &trajectories, std::int64_t boundary);

struct EvalOptions {
  // Bucket upper bounds in km; anything beyond the last bound lands in an
  // open-ended bucket.
  std::vector<double> distance_buckets_km = {2.0, 5.0, 10.0, 35.0};
  bool run_shortest = true;
  bool run_fastest = true;
  unsigned threads = 0;
};

struct EvalCell {
  double mean = 0;
  std::size_t n = 0;
};

struct MethodReport {
  std::string method;
  // metric -> bucket label -> cell, for bucket kinds "distance" and "region"
  std::map<std::string, std::map<std::string, EvalCell>> by_distance;
  std::map<std::string, std::map<std::string, EvalCell>> by_region;
  std::map<std::string, EvalCell> overall; // metric -> cell
  std::size_t unroutable = 0;
  double mean_query_ms = 0;
};

struct EvalReport {
  std::vector<MethodReport> methods;
  std::size_t queries = 0;
  std::size_t skipped_unroutable = 0; // queries excluded from every mean
};

// Scores L2R against the shortest/fastest baselines on held-out trajectories.
// Throws Error if any test trajectory id overlaps the model's training ids
// (the model records them at build time).
EvalReport evaluate(const RegionGraphModel &model, const RoadNetwork &net,
                    const std::vector<Trajectory> &test,
                    const std::vector<std::int64_t> &train_traj_ids,
                    const EvalOptions &opts = {});

std::string report_to_json(const EvalReport &report);
std::string report_to_csv(const EvalReport &report);

} // namespace l2r
