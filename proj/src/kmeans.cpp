#include "ldao/kmeans.hpp"

#include "ldao/errors.hpp"
#include "ldao/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ldao {

namespace {

// Squared distance of every row to one centroid.
Eigen::VectorXd sq_dist_to(const Eigen::MatrixXd& points, const Eigen::RowVectorXd& center) {
    return (points.rowwise() - center).rowwise().squaredNorm();
}

// Nearest centroid per point, ties to the lowest cluster index.
void assign_points(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                   std::vector<int>& assignments, Eigen::VectorXd& best_dist) {
    const Eigen::Index n = points.rows();
    const int k = static_cast<int>(centroids.rows());
    best_dist = sq_dist_to(points, centroids.row(0));
    std::fill(assignments.begin(), assignments.end(), 0);
    for (int c = 1; c < k; ++c) {
        Eigen::VectorXd dist = sq_dist_to(points, centroids.row(c));
        for (Eigen::Index i = 0; i < n; ++i) {
            if (dist[i] < best_dist[i]) {
                best_dist[i] = dist[i];
                assignments[i] = c;
            }
        }
    }
}

// Moves the globally farthest point (among clusters that can spare one)
// into each empty cluster, keeping every cluster non-empty.
void repair_empty_clusters(const Eigen::MatrixXd& points, std::vector<int>& assignments,
                           Eigen::VectorXd& best_dist, std::vector<Eigen::Index>& counts, int k) {
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) continue;
        Eigen::Index donor = -1;
        double worst = -1.0;
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            if (counts[static_cast<std::size_t>(assignments[i])] < 2) continue;
            if (best_dist[i] > worst) {
                worst = best_dist[i];
                donor = i;
            }
        }
        if (donor < 0) continue;  // k > distinct points; leave for caller's SSE
        counts[static_cast<std::size_t>(assignments[donor])] -= 1;
        assignments[donor] = c;
        counts[static_cast<std::size_t>(c)] += 1;
        best_dist[donor] = 0.0;  // becomes its own centroid on the next update
    }
}

std::vector<Eigen::Index> count_members(const std::vector<int>& assignments, int k) {
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (int a : assignments) counts[static_cast<std::size_t>(a)] += 1;
    return counts;
}

Eigen::MatrixXd centroid_means(const Eigen::MatrixXd& points, const std::vector<int>& assignments,
                               const std::vector<Eigen::Index>& counts, int k) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        sums.row(assignments[i]) += points.row(i);
    for (int c = 0; c < k; ++c)
        sums.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    return sums;
}

// D^2-weighted k-means++ seeding.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centroids(k, points.cols());
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    centroids.row(0) = points.row(pick(rng));

    Eigen::VectorXd dist = sq_dist_to(points, centroids.row(0));
    for (int c = 1; c < k; ++c) {
        double total = dist.sum();
        Eigen::Index chosen;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double threshold = u(rng);
            double cumulative = 0.0;
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                cumulative += dist[i];
                if (cumulative >= threshold) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);  // all remaining mass at the chosen centers
        }
        centroids.row(c) = points.row(chosen);
        dist = dist.cwiseMin(sq_dist_to(points, centroids.row(c)));
    }
    return centroids;
}

ClusterModel lloyd_run(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                       int max_iterations, double tolerance) {
    const Eigen::Index n = points.rows();
    auto rng = make_engine(seed);

    ClusterModel model;
    model.k = k;
    model.assignments.assign(static_cast<std::size_t>(n), 0);
    model.centroids = seed_centroids(points, k, rng);

    Eigen::VectorXd best_dist(n);
    std::vector<Eigen::Index> counts;
    for (int iter = 0; iter < max_iterations; ++iter) {
        assign_points(points, model.centroids, model.assignments, best_dist);
        counts = count_members(model.assignments, k);
        repair_empty_clusters(points, model.assignments, best_dist, counts, k);

        Eigen::MatrixXd updated = centroid_means(points, model.assignments, counts, k);
        double displacement = (updated - model.centroids).rowwise().norm().maxCoeff();
        model.centroids = std::move(updated);

        double sse = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            sse += (points.row(i) - model.centroids.row(model.assignments[i])).squaredNorm();
        model.sse_history.push_back(sse);

        if (displacement < tolerance) break;
    }

    // Final pass so every point sits with its nearest centroid; centroids are
    // not moved again. Repair keeps the non-empty invariant in tie cases.
    assign_points(points, model.centroids, model.assignments, best_dist);
    counts = count_members(model.assignments, k);
    repair_empty_clusters(points, model.assignments, best_dist, counts, k);

    model.sse = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        model.sse += (points.row(i) - model.centroids.row(model.assignments[i])).squaredNorm();
    model.sse_history.push_back(model.sse);

    model.weights.resize(k);
    for (int c = 0; c < k; ++c)
        model.weights[c] = static_cast<double>(counts[static_cast<std::size_t>(c)]) /
                           static_cast<double>(n);
    return model;
}

} // namespace

ClusterModel kmeans_fit(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                        int restarts, int max_iterations, double tolerance, int threads) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (points.rows() < k)
        throw TooFewPoints("k-means needs at least k=" + std::to_string(k) + " points, got " +
                           std::to_string(points.rows()));
    if (restarts < 1) throw ValidationError("restarts must be >= 1");

    std::vector<ClusterModel> runs(static_cast<std::size_t>(restarts));
    parallel_for(
        static_cast<std::size_t>(restarts),
        [&](std::size_t r) {
            runs[r] = lloyd_run(points, k, mix_seed(seed, stream::kmeans_restart, r),
                                max_iterations, tolerance);
        },
        threads);

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r].sse < runs[best].sse) best = r;
    return runs[best];
}

ElbowTrace sse_curve(const Eigen::MatrixXd& points, int k_min, int k_max,
                     std::uint64_t seed, int restarts, int max_iterations,
                     double tolerance, int threads) {
    if (k_min < 1) throw ValidationError("k_min must be >= 1");
    if (k_max < k_min) throw ValidationError("k_max must be >= k_min");
    if (points.rows() < k_max)
        throw TooFewPoints("k range up to " + std::to_string(k_max) + " needs at least " +
                           std::to_string(k_max) + " points, got " + std::to_string(points.rows()));

    const int count = k_max - k_min + 1;
    std::vector<double> sse(static_cast<std::size_t>(count));
    parallel_for(
        static_cast<std::size_t>(count),
        [&](std::size_t i) {
            int k = k_min + static_cast<int>(i);
            sse[i] = kmeans_fit(points, k, kmeans_seed_for_k(seed, k), restarts,
                                max_iterations, tolerance, 1)
                         .sse;
        },
        threads);

    ElbowTrace trace;
    for (int k = k_min; k <= k_max; ++k)
        trace.sse_by_k[k] = sse[static_cast<std::size_t>(k - k_min)];
    for (int k = k_min + 1; k <= k_max; ++k) {
        double prev = trace.sse_by_k[k - 1];
        double curr = trace.sse_by_k[k];
        // identical-point degenerate case: no improvement is possible
        double delta = prev > 0.0 ? (prev - curr) / prev : 0.0;
        trace.deltas[k] = delta;
        if (curr > prev) {
            std::ostringstream oss;
            oss << "SSE(" << k << ") = " << curr << " exceeds SSE(" << (k - 1) << ") = " << prev
                << "; local optimum, consider more restarts";
            trace.notes.push_back(oss.str());
        }
    }
    return trace;
}

int select_k(const ElbowTrace& trace, double delta_threshold) {
    if (trace.sse_by_k.empty()) throw ValidationError("elbow trace is empty");
    const int k_min = trace.sse_by_k.begin()->first;
    const int k_max = trace.sse_by_k.rbegin()->first;
    if (k_min == k_max) return k_min;
    for (int k = k_min; k < k_max; ++k)
        if (trace.deltas.at(k + 1) < delta_threshold) return k;
    return k_max;
}

} // namespace ldao
