#include "l2r/transfer.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "l2r/geo.hpp"
#include "l2r/parallel.hpp"

namespace l2r {

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  for (const auto &[col, val] : rows[i])
    if (col == j) return val;
  return 0.0;
}

std::size_t SparseMatrix::nnz() const {
  std::size_t count = 0;
  for (const auto &row : rows) count += row.size();
  return count;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto &[col, val] : rows[i]) d[i] += val;
  return d;
}

namespace {

std::vector<RoadType> region_top_types(const RoadNetwork &net, const Region &region,
                                       int top_k) {
  std::array<std::uint64_t, kRoadTypeCount> counts{};
  for (VertexId v : region.members) {
    for (EdgeId e : net.out_edges(v)) counts[road_type_code(net.edge(e).type) - 1] += 1;
    for (EdgeId e : net.in_edges(v)) counts[road_type_code(net.edge(e).type) - 1] += 1;
  }
  std::vector<int> order(kRoadTypeCount);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });
  std::vector<RoadType> top;
  for (int idx : order) {
    if (counts[idx] == 0 || static_cast<int>(top.size()) >= top_k) break;
    top.push_back(static_cast<RoadType>(idx + 1));
  }
  return top;
}

RegionEdgeFeatures make_features(const RegionGraphModel &model, const RegionEdge &re,
                                 const std::vector<std::vector<RoadType>> &top_types) {
  const Region &a = model.nodes[re.from].region;
  const Region &b = model.nodes[re.to].region;
  RegionEdgeFeatures f;
  f.dis_m = distance_m(a.centroid_lon, a.centroid_lat, b.centroid_lon, b.centroid_lat);
  for (RoadType ta : top_types[re.from])
    for (RoadType tb : top_types[re.to]) f.f.emplace_back(ta, tb);
  std::sort(f.f.begin(), f.f.end());
  return f;
}

} // namespace

RegionEdgeFeatures region_edge_features(const RoadNetwork &net, const RegionGraphModel &model,
                                        const RegionEdge &re, int top_k) {
  std::vector<std::vector<RoadType>> top_types(model.nodes.size());
  top_types[re.from] = region_top_types(net, model.nodes[re.from].region, top_k);
  top_types[re.to] = region_top_types(net, model.nodes[re.to].region, top_k);
  return make_features(model, re, top_types);
}

double re_sim(const RegionEdgeFeatures &a, const RegionEdgeFeatures &b) {
  double ratio;
  if (a.dis_m == 0 && b.dis_m == 0) ratio = 1.0; // identical distances
  else ratio = std::min(a.dis_m, b.dis_m) / std::max(a.dis_m, b.dis_m);

  double jaccard;
  if (a.f.empty() && b.f.empty()) {
    jaccard = 1.0;
  } else {
    std::vector<std::pair<RoadType, RoadType>> shared, all;
    std::set_intersection(a.f.begin(), a.f.end(), b.f.begin(), b.f.end(),
                          std::back_inserter(shared));
    std::set_union(a.f.begin(), a.f.end(), b.f.begin(), b.f.end(), std::back_inserter(all));
    jaccard = static_cast<double>(shared.size()) / static_cast<double>(all.size());
  }
  return ratio + jaccard;
}

SparseMatrix build_adjacency(const std::vector<RegionEdgeFeatures> &features, double amr) {
  SparseMatrix m;
  m.n = features.size();
  m.rows.resize(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      const double s = re_sim(features[i], features[j]);
      if (s > amr) {
        m.rows[i].emplace_back(static_cast<std::uint32_t>(j), s);
        m.rows[j].emplace_back(static_cast<std::uint32_t>(i), s);
      }
    }
  }
  return m;
}

std::vector<std::vector<double>> build_seed_matrix(
    const std::vector<const RegionEdge *> &edges_in_order, std::size_t t_count,
    const FeatureSpace &fs) {
  std::vector<std::vector<double>> y(edges_in_order.size(),
                                     std::vector<double>(fs.p(), 0.0));
  for (std::size_t row = 0; row < t_count; ++row) {
    const RegionEdge *e = edges_in_order[row];
    if (!e->preference)
      throw Error("T-edge " + std::to_string(e->id) + " lacks a learned preference");
    y[row][fs.master_column(e->preference->master)] = 1.0;
    if (auto col = fs.slave_column(e->preference->slave)) y[row][*col] = 1.0;
  }
  return y;
}

TransferSystem build_transfer_system(const RoadNetwork &net, const RegionGraphModel &model,
                                     const FeatureSpace &fs, const TransferParams &params) {
  TransferSystem sys;
  sys.features = fs;
  sys.params = params;

  for (const RegionEdge &e : model.edges)
    if (e.kind == RegionEdgeKind::T) sys.edge_order.push_back(e.id);
  sys.t_count = sys.edge_order.size();
  for (const RegionEdge &e : model.edges)
    if (e.kind == RegionEdgeKind::B) sys.edge_order.push_back(e.id);
  sys.n = sys.edge_order.size();
  sys.is_seed.assign(sys.n, 0);
  for (std::size_t i = 0; i < sys.t_count; ++i) sys.is_seed[i] = 1;

  std::vector<std::vector<RoadType>> top_types(model.nodes.size());
  for (std::size_t r = 0; r < model.nodes.size(); ++r)
    top_types[r] = region_top_types(net, model.nodes[r].region, params.top_k);

  std::vector<RegionEdgeFeatures> features;
  features.reserve(sys.n);
  for (std::uint32_t idx : sys.edge_order)
    features.push_back(make_features(model, model.edges[idx], top_types));

  sys.m = build_adjacency(features, params.amr);

  std::vector<const RegionEdge *> ordered;
  ordered.reserve(sys.n);
  for (std::uint32_t idx : sys.edge_order) ordered.push_back(&model.edges[idx]);
  sys.y = build_seed_matrix(ordered, sys.t_count, fs);
  return sys;
}

namespace {

// (S + mu1*L + mu2*I) v with L = D - M, touching only stored nonzeros.
void apply_system(const TransferSystem &sys, const std::vector<double> &d,
                  const std::vector<double> &v, std::vector<double> &out) {
  const double mu1 = sys.params.mu1, mu2 = sys.params.mu2;
  for (std::size_t i = 0; i < sys.n; ++i) {
    double acc = (sys.is_seed[i] ? v[i] : 0.0) + mu1 * d[i] * v[i] + mu2 * v[i];
    for (const auto &[col, val] : sys.m.rows[i]) acc -= mu1 * val * v[col];
    out[i] = acc;
  }
}

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_solvable_without_ridge(const TransferSystem &sys) {
  // without the ridge term, a similarity component holding no seed row keeps
  // the system singular
  std::vector<std::uint32_t> parent(sys.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < sys.n; ++i)
    for (const auto &[col, val] : sys.m.rows[i]) {
      (void)val;
      parent[find(static_cast<std::uint32_t>(i))] = find(col);
    }
  std::vector<char> has_seed(sys.n, 0);
  for (std::size_t i = 0; i < sys.n; ++i)
    if (sys.is_seed[i]) has_seed[find(static_cast<std::uint32_t>(i))] = 1;
  for (std::size_t i = 0; i < sys.n; ++i) {
    if (!has_seed[find(static_cast<std::uint32_t>(i))])
      throw Error("transfer system is singular: region edge component without any "
                  "seeded T-edge; set mu2 > 0");
  }
}

} // namespace

void solve_transfer(TransferSystem &sys) {
  const std::size_t p = sys.features.p();
  if (sys.params.mu2 == 0.0) check_solvable_without_ridge(sys);
  sys.y_hat.assign(sys.n, std::vector<double>(p, 0.0));
  sys.iterations_per_column.assign(p, 0);
  sys.residual_per_column.assign(p, 0.0);
  const std::vector<double> d = sys.m.row_sums();

  std::vector<int> failed(p, 0);
  parallel_for(p, sys.params.threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(sys.n), r(sys.n), pv(sys.n), ap(sys.n), b(sys.n);
    for (std::size_t col = lo; col < hi; ++col) {
      for (std::size_t i = 0; i < sys.n; ++i)
        b[i] = sys.is_seed[i] ? sys.y[i][col] : 0.0;
      const double bnorm = std::sqrt(dot(b, b));
      if (bnorm == 0.0) continue; // zero seeds solve to zero exactly
      std::fill(x.begin(), x.end(), 0.0);
      r = b;
      pv = r;
      double rs = dot(r, r);
      int it = 0;
      double rel = std::sqrt(rs) / bnorm;
      const bool trace = col == 0 && sys.params.iterate_trace_col0;
      if (trace) sys.params.iterate_trace_col0->push_back(x);
      while (rel > sys.params.cg_tol && it < sys.params.cg_max_iters) {
        apply_system(sys, d, pv, ap);
        const double alpha = rs / dot(pv, ap);
        for (std::size_t i = 0; i < sys.n; ++i) {
          x[i] += alpha * pv[i];
          r[i] -= alpha * ap[i];
        }
        const double rs_new = dot(r, r);
        for (std::size_t i = 0; i < sys.n; ++i) pv[i] = r[i] + (rs_new / rs) * pv[i];
        rs = rs_new;
        rel = std::sqrt(rs) / bnorm;
        it += 1;
        if (trace) sys.params.iterate_trace_col0->push_back(x);
      }
      sys.iterations_per_column[col] = it;
      sys.residual_per_column[col] = rel;
      if (rel > sys.params.cg_tol) {
        failed[col] = 1;
        continue;
      }
      for (std::size_t i = 0; i < sys.n; ++i) sys.y_hat[i][col] = x[i];
    }
  });
  for (std::size_t col = 0; col < p; ++col) {
    if (failed[col])
      throw SolverError("conjugate gradient did not converge on feature column " +
                            sys.features.column_name(col) + " (relative residual " +
                            std::to_string(sys.residual_per_column[col]) + ")",
                        sys.residual_per_column[col], sys.iterations_per_column[col]);
  }
}

std::vector<std::optional<PreferenceVector>> extract_preferences(const TransferSystem &sys) {
  const FeatureSpace &fs = sys.features;
  const std::size_t n_cost = fs.cost_features.size();
  const std::size_t n_road = fs.road_features.size();
  std::vector<std::optional<PreferenceVector>> out(sys.n);
  for (std::size_t i = 0; i < sys.n; ++i) {
    const std::vector<double> &row = sys.y_hat[i];
    const double row_max = *std::max_element(row.begin(), row.end());
    if (row_max < sys.params.null_eps) continue; // null preference
    std::size_t best_cost = 0;
    for (std::size_t c = 1; c < n_cost; ++c)
      if (row[c] > row[best_cost]) best_cost = c;
    PreferenceVector v;
    v.master = fs.cost_features[best_cost];
    v.slave = SlaveSet::none();
    if (n_road > 0) {
      std::size_t best_road = 0;
      for (std::size_t c = 1; c < n_road; ++c)
        if (row[n_cost + c] > row[n_cost + best_road]) best_road = c;
      // a road block carrying only diffusion crumbs stays unconstrained
      const double floor = std::max(sys.params.null_eps,
                                    sys.params.slave_rel_eps * row[best_cost]);
      if (row[n_cost + best_road] >= floor) v.slave = fs.road_features[best_road];
    }
    out[i] = v;
  }
  return out;
}

double transfer_objective(const TransferSystem &sys,
                          const std::vector<std::vector<double>> &y_hat) {
  const std::size_t p = sys.features.p();
  const std::vector<double> d = sys.m.row_sums();
  double total = 0;
  for (std::size_t col = 0; col < p; ++col) {
    double fit = 0, smooth = 0, ridge = 0;
    for (std::size_t i = 0; i < sys.n; ++i) {
      const double yh = y_hat[i][col];
      if (sys.is_seed[i]) {
        const double diff = sys.y[i][col] - yh;
        fit += diff * diff;
      }
      smooth += d[i] * yh * yh;
      for (const auto &[cj, val] : sys.m.rows[i]) smooth -= val * yh * y_hat[cj][col];
      ridge += yh * yh;
    }
    total += fit + sys.params.mu1 * smooth + sys.params.mu2 * ridge;
  }
  return total;
}

TransferReport transfer_preferences(const RoadNetwork &net, RegionGraphModel &model,
                                    const FeatureSpace &fs, const TransferParams &params) {
  const auto t0 = std::chrono::steady_clock::now();
  TransferSystem sys = build_transfer_system(net, model, fs, params);
  solve_transfer(sys);
  const auto prefs = extract_preferences(sys);

  std::size_t b_total = 0, b_null = 0;
  for (std::size_t row = sys.t_count; row < sys.n; ++row) {
    RegionEdge &edge = model.edges[sys.edge_order[row]];
    b_total += 1;
    if (prefs[row]) {
      edge.preference = prefs[row];
      edge.pref_source = PreferenceSource::Transferred;
    } else {
      edge.preference = std::nullopt;
      edge.pref_source = PreferenceSource::NullFallback;
      b_null += 1;
    }
  }

  TransferReport report;
  report.amr = params.amr;
  report.mu1 = params.mu1;
  report.mu2 = params.mu2;
  report.n = sys.n;
  report.nnz = sys.m.nnz();
  report.p = fs.p();
  report.t_edges = sys.t_count;
  report.b_edges = b_total;
  report.iterations_per_column = sys.iterations_per_column;
  report.residuals = sys.residual_per_column;
  report.null_rate = b_total ? static_cast<double>(b_null) / b_total : 0.0;
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  return report;
}

namespace {

std::vector<std::size_t> preference_columns(const PreferenceVector &v, const FeatureSpace &fs) {
  std::vector<std::size_t> cols = {fs.master_column(v.master)};
  if (auto sc = fs.slave_column(v.slave)) cols.push_back(*sc);
  return cols;
}

double jaccard_columns(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
  std::vector<std::size_t> sa = a, sb = b, shared, all;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(shared));
  std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(all));
  return all.empty() ? 0.0 : static_cast<double>(shared.size()) / all.size();
}

} // namespace

HoldoutResult holdout_transfer_accuracy(const RoadNetwork &net, const RegionGraphModel &model,
                                        const FeatureSpace &fs, const TransferParams &params,
                                        int train_partitions, std::uint64_t seed) {
  if (train_partitions < 1 || train_partitions > 4)
    throw Error("train_partitions must be between 1 and 4");
  TransferSystem sys = build_transfer_system(net, model, fs, params);
  if (sys.t_count < 5) throw Error("holdout needs at least five T-edges");

  std::vector<std::size_t> t_rows(sys.t_count);
  std::iota(t_rows.begin(), t_rows.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(t_rows.begin(), t_rows.end(), rng);

  // partition p of 5 holds rows with index % 5 == p; the last one is reserved
  std::vector<std::size_t> reserved;
  for (std::size_t i = 0; i < t_rows.size(); ++i) {
    const int part = static_cast<int>(i % 5);
    const bool in_train = part < train_partitions;
    if (part == 4) reserved.push_back(t_rows[i]);
    if (!in_train) {
      sys.is_seed[t_rows[i]] = 0;
      std::fill(sys.y[t_rows[i]].begin(), sys.y[t_rows[i]].end(), 0.0);
    }
  }
  solve_transfer(sys);
  const auto prefs = extract_preferences(sys);

  HoldoutResult res;
  res.nnz = sys.m.nnz();
  double acc = 0;
  std::size_t nulls = 0;
  for (std::size_t row : reserved) {
    const RegionEdge &edge = model.edges[sys.edge_order[row]];
    const auto truth = preference_columns(*edge.preference, fs);
    if (!prefs[row]) {
      nulls += 1;
      continue; // scores zero
    }
    acc += jaccard_columns(truth, preference_columns(*prefs[row], fs));
  }
  res.evaluated = reserved.size();
  res.accuracy = reserved.empty() ? 0.0 : acc / static_cast<double>(reserved.size());
  res.null_rate = reserved.empty() ? 0.0 : static_cast<double>(nulls) / reserved.size();
  return res;
}

} // namespace l2r
