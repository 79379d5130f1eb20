#pragma once

#include "ldao/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ldao {

// Result of one k-means fit in the joint space. Every cluster is non-empty;
// sse is recomputable from (points, centroids, assignments); weights are the
// mixture proportions n_k / N and sum to 1.
struct ClusterModel {
    int k = 0;
    Eigen::MatrixXd centroids;       // k x dim
    std::vector<int> assignments;    // N entries in [0, k)
    double sse = 0.0;
    Eigen::VectorXd weights;         // k entries, n_k / N
    std::vector<double> sse_history; // winning restart, one entry per Lloyd iteration
};

// SSE(K) across a K range plus the relative improvements
// delta(K) = (SSE(K-1) - SSE(K)) / SSE(K-1). k_star stays 0 until selected.
struct ElbowTrace {
    std::map<int, double> sse_by_k;
    std::map<int, double> deltas;
    int k_star = 0;
    std::vector<std::string> notes;  // local-optimum SSE inversions etc.
};

// Lloyd iterations with k-means++ seeding, best of `restarts` by SSE.
// Empty clusters are repaired by moving the point farthest from its
// centroid. Deterministic given (points, k, seed, restarts) regardless of
// worker count. Throws TooFewPoints when N < k.
ClusterModel kmeans_fit(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                        int restarts = 10, int max_iterations = 300,
                        double tolerance = 1e-6, int threads = 0);

// One fit per K in [k_min, k_max], each on an independent derived stream so
// results do not depend on the other fits. SSE inversions caused by local
// optima are recorded in notes, never raised.
ElbowTrace sse_curve(const Eigen::MatrixXd& points, int k_min, int k_max,
                     std::uint64_t seed, int restarts = 10, int max_iterations = 300,
                     double tolerance = 1e-6, int threads = 0);

// Elbow rule: the smallest K in [k_min, k_max-1] whose next step improves
// by less than delta_threshold; k_max when every step keeps paying;
// k_min when the range is a single value.
int select_k(const ElbowTrace& trace, double delta_threshold);

// Stream used for the fit at a given K; sse_curve and any later refit at
// the selected K must agree on this to reproduce the same model.
inline std::uint64_t kmeans_seed_for_k(std::uint64_t seed, int k) {
    return mix_seed(seed, stream::kmeans_fit, static_cast<std::uint64_t>(k));
}

} // namespace ldao
