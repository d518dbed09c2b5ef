#include "l2r/eval.hpp"

#include <chrono>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "l2r/parallel.hpp"
#include "l2r/preference.hpp"
#include "l2r/router.hpp"
#include "l2r/search.hpp"

namespace l2r {

std::pair<std::vector<Trajectory>, std::vector<Trajectory>> split_train_test(
    const std::vector<Trajectory> &trajectories, std::int64_t boundary) {
  std::pair<std::vector<Trajectory>, std::vector<Trajectory>> out;
  for (const Trajectory &t : trajectories) {
    if (t.departure < boundary) out.first.push_back(t);
    else out.second.push_back(t);
  }
  return out;
}

namespace {

std::string bucket_label(double km, const std::vector<double> &bounds) {
  double low = 0;
  for (double b : bounds) {
    if (km <= b) {
      return "(" + std::to_string(low).substr(0, std::to_string(low).find('.') + 2) + "," +
             std::to_string(b).substr(0, std::to_string(b).find('.') + 2) + "]";
    }
    low = b;
  }
  return ">" + std::to_string(low).substr(0, std::to_string(low).find('.') + 2);
}

std::string region_category(const RegionGraphModel &model, VertexId s, VertexId d) {
  const bool s_in = model.region_of_vertex(s) != kNoRegion;
  const bool d_in = model.region_of_vertex(d) != kNoRegion;
  if (s_in && d_in) return "InRegion";
  if (s_in || d_in) return "InOutRegion";
  return "OutRegion";
}

struct QueryOutcome {
  bool ok = false;
  double psim_i = 0;
  double psim_u = 0;
  double ms = 0;
};

struct MethodAccumulator {
  std::string name;
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> by_distance;
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> by_region;
  std::map<std::string, std::pair<double, std::size_t>> overall;
  std::size_t unroutable = 0;
  double total_ms = 0;
  std::size_t timed = 0;
};

void accumulate(MethodAccumulator &acc, const QueryOutcome &q, const std::string &bucket,
                const std::string &category) {
  acc.total_ms += q.ms;
  acc.timed += 1;
  if (!q.ok) {
    acc.unroutable += 1;
    return;
  }
  const std::pair<const char *, double> metrics[] = {{"psim", q.psim_i},
                                                     {"psim_union", q.psim_u}};
  for (const auto &[metric, value] : metrics) {
    auto &cell = acc.overall[metric];
    cell.first += value;
    cell.second += 1;
    auto &dcell = acc.by_distance[metric][bucket];
    dcell.first += value;
    dcell.second += 1;
    auto &rcell = acc.by_region[metric][category];
    rcell.first += value;
    rcell.second += 1;
  }
}

MethodReport finalize(const MethodAccumulator &acc) {
  MethodReport r;
  r.method = acc.name;
  auto fold = [](const auto &src, auto &dst) {
    for (const auto &[metric, buckets] : src)
      for (const auto &[bucket, cell] : buckets)
        dst[metric][bucket] = EvalCell{cell.second ? cell.first / cell.second : 0.0,
                                       cell.second};
  };
  fold(acc.by_distance, r.by_distance);
  fold(acc.by_region, r.by_region);
  for (const auto &[metric, cell] : acc.overall)
    r.overall[metric] = EvalCell{cell.second ? cell.first / cell.second : 0.0, cell.second};
  r.unroutable = acc.unroutable;
  r.mean_query_ms = acc.timed ? acc.total_ms / acc.timed : 0.0;
  return r;
}

} // namespace

EvalReport evaluate(const RegionGraphModel &model, const RoadNetwork &net,
                    const std::vector<Trajectory> &test,
                    const std::vector<std::int64_t> &train_traj_ids,
                    const EvalOptions &opts) {
  // staging guard: nothing from the test set may have reached model building
  std::unordered_set<std::int64_t> train_ids(train_traj_ids.begin(), train_traj_ids.end());
  for (const Trajectory &t : test) {
    if (train_ids.count(t.traj_id))
      throw Error("trajectory " + std::to_string(t.traj_id) +
                  " appears in both training and test sets");
  }

  enum { kL2R = 0, kShortest = 1, kFastest = 2 };
  struct PerQuery {
    std::string bucket;
    std::string category;
    QueryOutcome outcome[3];
  };
  std::vector<PerQuery> rows(test.size());

  parallel_for(test.size(), opts.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Trajectory &t = test[i];
      PerQuery &row = rows[i];
      const VertexId s = t.path.source(), d = t.path.destination();
      row.bucket = bucket_label(path_cost(net, t.path, CostKind::DI) / 1000.0,
                                opts.distance_buckets_km);
      row.category = region_category(model, s, d);

      auto run = [&](int slot, auto &&fn) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const Path p = fn();
          row.outcome[slot].psim_i = psim_intersection(net, t.path, p);
          row.outcome[slot].psim_u = psim_union(net, t.path, p);
          row.outcome[slot].ok = true;
        } catch (const Error &) {
          row.outcome[slot].ok = false;
        }
        row.outcome[slot].ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
      };
      run(kL2R, [&] { return route(model, net, s, d, t.departure).path; });
      if (opts.run_shortest)
        run(kShortest, [&] { return shortest_path(net, s, d, CostKind::DI); });
      if (opts.run_fastest)
        run(kFastest, [&] { return shortest_path(net, s, d, CostKind::TT); });
    }
  });

  std::vector<MethodAccumulator> accs;
  auto add_method = [&](const char *name) {
    accs.emplace_back();
    accs.back().name = name;
  };
  add_method("L2R");
  if (opts.run_shortest) add_method("Shortest");
  if (opts.run_fastest) add_method("Fastest");

  std::size_t skipped = 0;
  for (const PerQuery &row : rows) {
    int slot = 0;
    accumulate(accs[slot++], row.outcome[kL2R], row.bucket, row.category);
    if (opts.run_shortest) accumulate(accs[slot++], row.outcome[kShortest], row.bucket, row.category);
    if (opts.run_fastest) accumulate(accs[slot++], row.outcome[kFastest], row.bucket, row.category);
    if (!row.outcome[kL2R].ok) skipped += 1;
  }

  EvalReport report;
  report.queries = test.size();
  report.skipped_unroutable = skipped;
  for (const MethodAccumulator &acc : accs) report.methods.push_back(finalize(acc));
  return report;
}

std::string report_to_json(const EvalReport &report) {
  nlohmann::json j;
  j["queries"] = report.queries;
  j["skipped_unroutable"] = report.skipped_unroutable;
  auto &methods = j["methods"] = nlohmann::json::array();
  for (const MethodReport &m : report.methods) {
    nlohmann::json jm;
    jm["method"] = m.method;
    jm["unroutable"] = m.unroutable;
    jm["mean_query_ms"] = m.mean_query_ms;
    for (const auto &[metric, cell] : m.overall)
      jm["overall"][metric] = {{"mean", cell.mean}, {"n", cell.n}};
    for (const auto &[metric, buckets] : m.by_distance)
      for (const auto &[bucket, cell] : buckets)
        jm["by_distance"][metric][bucket] = {{"mean", cell.mean}, {"n", cell.n}};
    for (const auto &[metric, buckets] : m.by_region)
      for (const auto &[bucket, cell] : buckets)
        jm["by_region"][metric][bucket] = {{"mean", cell.mean}, {"n", cell.n}};
    methods.push_back(jm);
  }
  return j.dump(2);
}

std::string report_to_csv(const EvalReport &report) {
  std::string out = "method,metric,bucket_kind,bucket,mean,n,mean_query_ms\n";
  auto emit = [&](const MethodReport &m, const std::string &metric,
                  const std::string &kind, const std::string &bucket, const EvalCell &cell) {
    out += m.method + "," + metric + "," + kind + "," + bucket + "," +
           std::to_string(cell.mean) + "," + std::to_string(cell.n) + "," +
           std::to_string(m.mean_query_ms) + "\n";
  };
  for (const MethodReport &m : report.methods) {
    for (const auto &[metric, cell] : m.overall) emit(m, metric, "overall", "all", cell);
    for (const auto &[metric, buckets] : m.by_distance)
      for (const auto &[bucket, cell] : buckets) emit(m, metric, "distance", bucket, cell);
    for (const auto &[metric, buckets] : m.by_region)
      for (const auto &[bucket, cell] : buckets) emit(m, metric, "region", bucket, cell);
  }
  return out;
}

} // namespace l2r
