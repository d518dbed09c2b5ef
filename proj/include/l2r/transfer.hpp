#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "l2r/preference.hpp"
#include "l2r/region_graph.hpp"

namespace l2r {

// Sparse symmetric similarity matrix, zero diagonal, row-compressed.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  double at(std::size_t i, std::size_t j) const;
  std::size_t nnz() const; // off-diagonal stored entries
  std::vector<double> row_sums() const; // the diagonal of D
};

struct TransferParams {
  double amr = 0.7;  // similarity threshold: keep reSim values strictly above
  double mu1 = 1.0;  // Laplacian smoothing weight
  double mu2 = 0.01; // L2 regularization weight
  int top_k = 2;     // road types per region for the feature set
  double cg_tol = 1e-6;
  int cg_max_iters = 1000;
  double null_eps = 1e-9;      // rows entirely below this transfer nothing
  double slave_rel_eps = 0.05; // road block must carry this share of the cost
                               // signal before a slave is attached
  unsigned threads = 0;
  // instrumentation: when set, every CG iterate of feature column 0 is
  // appended (forces that column onto one thread)
  std::vector<std::vector<double>> *iterate_trace_col0 = nullptr;
};

// The assembled transduction system: edge order is T-edges first then B-edges,
// recorded in `edge_order` as indices into the model's edge array.
struct TransferSystem {
  std::size_t n = 0;
  std::size_t t_count = 0;       // leading rows that are T-edges
  std::vector<char> is_seed;     // diagonal of S; by default 1 exactly for T rows
  SparseMatrix m;
  std::vector<std::vector<double>> y;     // n x p seeds
  std::vector<std::vector<double>> y_hat; // n x p solution (filled by solve)
  std::vector<std::uint32_t> edge_order;  // row -> model edge index
  FeatureSpace features;
  TransferParams params;
  std::vector<int> iterations_per_column;
  std::vector<double> residual_per_column;
};

// dis (equirectangular centroid distance) and the Cartesian product of the two
// regions' top-k road-type sets (ranked by incident-edge count, ties toward
// more major types).
RegionEdgeFeatures region_edge_features(const RoadNetwork &net, const RegionGraphModel &model,
                                        const RegionEdge &re, int top_k);

// min/max distance ratio plus Jaccard of the road-type-pair sets; in [0, 2].
// Two zero distances count as identical (ratio 1), as do two empty sets.
double re_sim(const RegionEdgeFeatures &a, const RegionEdgeFeatures &b);

// M[i][j] = reSim(i, j) when strictly above amr, else absent. Symmetric.
SparseMatrix build_adjacency(const std::vector<RegionEdgeFeatures> &features, double amr);

// Seed rows: 1 at the master column and at the slave column (if any) for each
// T-edge; zero rows for B-edges. Rows follow `edge_order`.
std::vector<std::vector<double>> build_seed_matrix(
    const std::vector<const RegionEdge *> &edges_in_order, std::size_t t_count,
    const FeatureSpace &fs);

// Assembles features, adjacency, and seeds for the model's region edges.
TransferSystem build_transfer_system(const RoadNetwork &net, const RegionGraphModel &model,
                                     const FeatureSpace &fs, const TransferParams &params);

// Solves (S + mu1*L + mu2*I) y_col = S*Y_col per feature column by conjugate
// gradients on the sparse operator. Throws SolverError on non-convergence and
// Error when mu2 == 0 leaves an all-B component singular.
void solve_transfer(TransferSystem &sys);

// argmax over cost columns and over road-condition columns; rows entirely
// below null_eps yield no preference. A row whose road block is all below
// null_eps gets a cost-only preference.
std::vector<std::optional<PreferenceVector>> extract_preferences(const TransferSystem &sys);

struct TransferReport {
  double amr = 0, mu1 = 0, mu2 = 0;
  std::size_t n = 0, nnz = 0, p = 0;
  std::size_t t_edges = 0, b_edges = 0;
  std::vector<int> iterations_per_column;
  std::vector<double> residuals;
  double null_rate = 0; // fraction of B-edges left without a preference
  double wall_time_ms = 0;
};

// Step 2 end-to-end: build the system, solve, and write transferred (or
// fastest-fallback) preferences onto the model's B-edges.
TransferReport transfer_preferences(const RoadNetwork &net, RegionGraphModel &model,
                                    const FeatureSpace &fs, const TransferParams &params);

// Eq.-2 objective evaluated term by term at a candidate solution.
double transfer_objective(const TransferSystem &sys, const std::vector<std::vector<double>> &y_hat);

struct HoldoutResult {
  double accuracy = 0;  // mean Jaccard between predicted and held-out feature sets
  double null_rate = 0; // held-out edges that received no prediction
  std::size_t evaluated = 0;
  std::size_t nnz = 0;
};

// Five-fold self-test: hide the reserved partition's seeds, transfer from the
// first `train_partitions` partitions, and score the hidden T-edges by Jaccard
// over feature sets.
HoldoutResult holdout_transfer_accuracy(const RoadNetwork &net, const RegionGraphModel &model,
                                        const FeatureSpace &fs, const TransferParams &params,
                                        int train_partitions, std::uint64_t seed);

} // namespace l2r
