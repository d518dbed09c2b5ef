#include "l2r/preference.hpp"

#include <algorithm>

#include "l2r/apply_pref.hpp"
#include "l2r/search.hpp"

namespace l2r {

std::vector<RoadType> SlaveSet::types() const {
  std::vector<RoadType> out;
  for (int code = 1; code <= kRoadTypeCount; ++code) {
    const RoadType t = static_cast<RoadType>(code);
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::string SlaveSet::name() const {
  if (is_none()) return "none";
  std::string out;
  for (RoadType t : types()) {
    if (!out.empty()) out += "+";
    out += road_type_name(t);
  }
  return out;
}

std::string PreferenceVector::to_string() const {
  return "<" + cost_kind_name(master) + ", " + slave.name() + ">";
}

FeatureSpace FeatureSpace::standard() {
  FeatureSpace fs;
  fs.cost_features = {CostKind::DI, CostKind::TT, CostKind::FC};
  for (int code = 1; code <= kRoadTypeCount; ++code)
    fs.road_features.push_back(SlaveSet::of(static_cast<RoadType>(code)));
  return fs;
}

std::size_t FeatureSpace::master_column(CostKind k) const {
  for (std::size_t i = 0; i < cost_features.size(); ++i)
    if (cost_features[i] == k) return i;
  throw Error("cost feature " + cost_kind_name(k) + " not in feature space");
}

std::optional<std::size_t> FeatureSpace::slave_column(SlaveSet s) const {
  if (s.is_none()) return std::nullopt;
  for (std::size_t i = 0; i < road_features.size(); ++i)
    if (road_features[i] == s) return cost_features.size() + i;
  throw Error("road feature " + s.name() + " not in feature space");
}

std::string FeatureSpace::column_name(std::size_t col) const {
  if (col < cost_features.size()) return cost_kind_name(cost_features[col]);
  return road_features[col - cost_features.size()].name();
}

namespace {

std::vector<EdgeId> unique_edges(const Path &p) {
  std::vector<EdgeId> e = p.edges;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

double edge_set_length(const RoadNetwork &net, const std::vector<EdgeId> &edges) {
  double total = 0;
  for (EdgeId e : edges) total += net.edge(e).length_m;
  return total;
}

} // namespace

double psim_intersection(const RoadNetwork &net, const Path &truth, const Path &candidate) {
  const std::vector<EdgeId> te = unique_edges(truth);
  if (te.empty()) throw Error("pSim requires a ground-truth path with at least one edge");
  const std::vector<EdgeId> ce = unique_edges(candidate);
  std::vector<EdgeId> shared;
  std::set_intersection(te.begin(), te.end(), ce.begin(), ce.end(), std::back_inserter(shared));
  return edge_set_length(net, shared) / edge_set_length(net, te);
}

double psim_union(const RoadNetwork &net, const Path &truth, const Path &candidate) {
  const std::vector<EdgeId> te = unique_edges(truth);
  const std::vector<EdgeId> ce = unique_edges(candidate);
  if (te.empty() && ce.empty())
    throw Error("pSim-union requires at least one path with an edge");
  std::vector<EdgeId> shared, all;
  std::set_intersection(te.begin(), te.end(), ce.begin(), ce.end(), std::back_inserter(shared));
  std::set_union(te.begin(), te.end(), ce.begin(), ce.end(), std::back_inserter(all));
  return edge_set_length(net, shared) / edge_set_length(net, all);
}

Path lowest_cost_path(const RoadNetwork &net, VertexId s, VertexId d, CostKind master) {
  return shortest_path(net, s, d, master);
}

namespace {

// Aggregate similarity between the observed paths and the paths a candidate
// vector produces for the same endpoints. Unreachable candidates contribute 0.
double preference_score(const RoadNetwork &net, const std::vector<WeightedPath> &paths,
                        const PreferenceVector &v) {
  double score = 0;
  for (const WeightedPath &wp : paths) {
    Path constructed;
    try {
      constructed = preference_dijkstra(net, v, wp.path.source(), wp.path.destination());
    } catch (const NoPathError &) {
      continue;
    }
    score += wp.count * psim_intersection(net, wp.path, constructed);
  }
  return score;
}

} // namespace

PreferenceVector learn_preference(const RoadNetwork &net,
                                  const std::vector<WeightedPath> &paths,
                                  const LearnOptions &opts) {
  if (paths.empty()) throw Error("cannot learn a preference from an empty path set");
  const FeatureSpace &fs = opts.features;
  if (fs.cost_features.empty()) throw Error("feature space has no cost features");

  // stage 1: best travel cost feature, judged by plain lowest-cost paths
  CostKind best_master = fs.cost_features.front();
  double best_score = -1;
  for (CostKind m : fs.cost_features) {
    double score = 0;
    for (const WeightedPath &wp : paths) {
      Path lc;
      try {
        lc = lowest_cost_path(net, wp.path.source(), wp.path.destination(), m);
      } catch (const NoPathError &) {
        continue;
      }
      score += wp.count * psim_intersection(net, wp.path, lc);
    }
    if (score > best_score) {
      best_score = score;
      best_master = m;
    }
  }

  // stage 2: keep a road-condition feature only on strict improvement
  SlaveSet best_slave = SlaveSet::none();
  double best_with_slave = best_score;
  for (const SlaveSet &f : fs.road_features) {
    const double score = preference_score(net, paths, {best_master, f});
    if (score > best_with_slave) {
      best_with_slave = score;
      best_slave = f;
    }
  }
  return {best_master, best_slave};
}

} // namespace l2r
