#pragma once

#include "ldao/config.hpp"
#include "ldao/dataset.hpp"
#include "ldao/kmeans.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ldao {

// Per-cluster growth targets: n_k' = ceil(alpha_k * n_k), alpha_k >= 1,
// so no cluster ever shrinks.
struct AugmentationPlan {
    std::vector<double> alphas;
    std::vector<std::int64_t> target_sizes;      // n_k'
    std::vector<std::int64_t> synthetic_counts;  // n_k' - n_k
};

// uniform: alpha_k = config.alpha for every cluster.
// adaptive: alpha_k = min(alpha_max, (max_j n_j / n_k)^gamma), at least 1,
// so smaller clusters grow more.
AugmentationPlan make_plan(const std::vector<std::int64_t>& cluster_sizes,
                           const RunConfig& config);

// Integer ceiling guarded against floating-point drift: values within
// 1e-9 relative of an integer round to it instead of spilling upward.
std::int64_t guarded_ceil(double value);

// Machine-readable account of one augmentation run.
struct RunReport {
    std::uint64_t seed = 0;
    int k_star = 0;
    std::map<int, double> sse_by_k;
    std::map<int, double> deltas;
    std::vector<std::int64_t> cluster_sizes;    // n_k
    std::vector<double> alphas;                 // alpha_k
    std::vector<std::int64_t> target_sizes;     // n_k'
    std::vector<double> lambdas;                // ridge applied per cluster
    std::vector<std::string> warnings;

    // key = value lines; stable ordering, 17-digit numeric round-trip.
    std::string to_text() const;
};

struct AugmentedDataset {
    Dataset dataset;              // originals first (input order), then
                                  // synthetic rows grouped by cluster index
    AugmentationPlan plan;
    std::vector<int> provenance;  // source cluster per synthetic row
    RunReport report;
};

// The full pipeline: standardize the joint space, sweep K and pick K* by
// the elbow rule, fit one KDE per cluster, grow each cluster to its target
// size, inverse-transform the synthetic points, and merge. Original rows
// pass through bitwise untouched. Deterministic given (dataset, config)
// for any worker count. Throws TooFewPoints when N < config.k_min;
// CholeskyFailure carries the offending cluster index.
AugmentedDataset run_ldao(const Dataset& ds, const RunConfig& config, int threads = 0);

} // namespace ldao
