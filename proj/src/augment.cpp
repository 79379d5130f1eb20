#include "ldao/augment.hpp"

#include "ldao/errors.hpp"
#include "ldao/kde.hpp"
#include "ldao/parallel.hpp"
#include "ldao/rng.hpp"
#include "ldao/standardize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ldao {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::int64_t guarded_ceil(double value) {
    const double guard = 1e-9 * std::max(1.0, std::abs(value));
    return static_cast<std::int64_t>(std::ceil(value - guard));
}

AugmentationPlan make_plan(const std::vector<std::int64_t>& cluster_sizes,
                           const RunConfig& config) {
    validate(config);
    if (cluster_sizes.empty()) throw ValidationError("plan needs at least one cluster");
    std::int64_t max_size = 0;
    for (std::int64_t size : cluster_sizes) {
        if (size < 1) throw ValidationError("cluster sizes must be >= 1");
        max_size = std::max(max_size, size);
    }

    AugmentationPlan plan;
    plan.alphas.reserve(cluster_sizes.size());
    for (std::int64_t size : cluster_sizes) {
        double alpha;
        if (config.alpha_mode == AlphaMode::uniform) {
            alpha = config.alpha;
        } else {
            double ratio = static_cast<double>(max_size) / static_cast<double>(size);
            alpha = std::min(config.alpha_max, std::pow(ratio, config.gamma));
            alpha = std::max(1.0, alpha);
        }
        plan.alphas.push_back(alpha);
        std::int64_t target = std::max(size, guarded_ceil(alpha * static_cast<double>(size)));
        plan.target_sizes.push_back(target);
        plan.synthetic_counts.push_back(target - size);
    }
    return plan;
}

std::string RunReport::to_text() const {
    std::ostringstream out;
    out << "seed = " << seed << '\n';
    out << "k_star = " << k_star << '\n';
    for (const auto& [k, sse] : sse_by_k) out << "sse_" << k << " = " << fmt(sse) << '\n';
    for (const auto& [k, delta] : deltas) out << "delta_" << k << " = " << fmt(delta) << '\n';
    for (std::size_t c = 0; c < cluster_sizes.size(); ++c) {
        out << "cluster_" << c << "_size = " << cluster_sizes[c] << '\n';
        out << "cluster_" << c << "_alpha = " << fmt(alphas[c]) << '\n';
        out << "cluster_" << c << "_target_size = " << target_sizes[c] << '\n';
        out << "cluster_" << c << "_lambda = " << fmt(lambdas[c]) << '\n';
    }
    for (const auto& warning : warnings) out << "warning = " << warning << '\n';
    return out.str();
}

AugmentedDataset run_ldao(const Dataset& ds, const RunConfig& config, int threads) {
    validate(ds);
    validate(config);
    const Eigen::Index n = ds.rows();
    const Eigen::Index d = ds.dims();
    if (n < config.k_min)
        throw TooFewPoints("dataset has " + std::to_string(n) + " rows, fewer than k_min = " +
                           std::to_string(config.k_min));

    AugmentedDataset result;
    RunReport& report = result.report;
    report.seed = config.seed;
    report.warnings = range_warnings(config);

    // k range cannot exceed the row count
    int k_max = config.k_max;
    if (k_max > n) {
        k_max = static_cast<int>(n);
        std::ostringstream oss;
        oss << "k_max reduced to " << k_max << " (dataset has only " << n << " rows)";
        report.warnings.push_back(oss.str());
    }

    auto [scaled, params] = standardize(ds);
    Eigen::MatrixXd joint = to_joint(scaled);

    ElbowTrace trace = sse_curve(joint, config.k_min, k_max, config.seed, config.restarts,
                                 config.max_iterations, config.tolerance, threads);
    trace.k_star = select_k(trace, config.elbow_threshold);
    report.sse_by_k = trace.sse_by_k;
    report.deltas = trace.deltas;
    report.k_star = trace.k_star;
    for (const auto& note : trace.notes) report.warnings.push_back(note);

    ClusterModel model = kmeans_fit(joint, trace.k_star, kmeans_seed_for_k(config.seed, trace.k_star),
                                    config.restarts, config.max_iterations, config.tolerance, threads);
    const int k = model.k;

    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < n; ++i)
        members[static_cast<std::size_t>(model.assignments[i])].push_back(i);

    std::vector<std::int64_t> sizes;
    sizes.reserve(static_cast<std::size_t>(k));
    for (const auto& m : members) sizes.push_back(static_cast<std::int64_t>(m.size()));
    report.cluster_sizes = sizes;

    result.plan = make_plan(sizes, config);
    report.alphas = result.plan.alphas;
    report.target_sizes = result.plan.target_sizes;
    report.lambdas.assign(static_cast<std::size_t>(k), 0.0);

    // Per-cluster KDE fit and sampling; cluster c draws from its own stream
    // so the merge is identical no matter how the work is scheduled.
    std::vector<Eigen::MatrixXd> synthetic(static_cast<std::size_t>(k));
    parallel_for(
        static_cast<std::size_t>(k),
        [&](std::size_t c) {
            Eigen::MatrixXd cluster_points(members[c].size(), d + 1);
            for (std::size_t r = 0; r < members[c].size(); ++r)
                cluster_points.row(static_cast<Eigen::Index>(r)) = joint.row(members[c][r]);
            ClusterKde kde;
            try {
                kde = select_bandwidth(cluster_points, config.bandwidth_scale);
            } catch (const CholeskyFailure& e) {
                throw CholeskyFailure("cluster " + std::to_string(c) + ": " + e.what());
            }
            report.lambdas[c] = kde.lambda;
            auto rng = make_engine(mix_seed(config.seed, stream::sampling, c));
            synthetic[c] = sample(kde, static_cast<std::size_t>(result.plan.synthetic_counts[c]), rng);
        },
        threads);

    std::int64_t total_synthetic = 0;
    for (std::int64_t count : result.plan.synthetic_counts) total_synthetic += count;

    Dataset out;
    out.feature_names = ds.feature_names;
    out.target_name = ds.target_name;
    out.features.resize(n + total_synthetic, d);
    out.target.resize(n + total_synthetic);
    out.features.topRows(n) = ds.features;  // originals bitwise untouched
    out.target.head(n) = ds.target;
    out.synthetic_mask.assign(static_cast<std::size_t>(n), false);
    out.synthetic_mask.resize(static_cast<std::size_t>(n + total_synthetic), true);

    // Observed column ranges for optional clipping.
    Eigen::VectorXd col_min, col_max;
    if (config.clip_to_range) {
        Eigen::MatrixXd original_joint = to_joint(ds);
        col_min = original_joint.colwise().minCoeff();
        col_max = original_joint.colwise().maxCoeff();
    }

    Eigen::Index row = n;
    for (int c = 0; c < k; ++c) {
        Eigen::MatrixXd restored = invert_standardization(params, synthetic[static_cast<std::size_t>(c)]);
        if (config.clip_to_range)
            restored = restored.cwiseMax(col_min.transpose().replicate(restored.rows(), 1))
                           .cwiseMin(col_max.transpose().replicate(restored.rows(), 1));
        for (Eigen::Index r = 0; r < restored.rows(); ++r, ++row) {
            out.features.row(row) = restored.row(r).head(d);
            out.target[row] = restored(r, d);
            result.provenance.push_back(c);
        }
    }

    result.dataset = std::move(out);
    return result;
}

} // namespace ldao
