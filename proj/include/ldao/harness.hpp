#pragma once

#include "ldao/config.hpp"
#include "ldao/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ldao {

inline constexpr const char* kBaselineMethod = "baseline";
inline constexpr const char* kLdaoMethod = "ldao";

struct CvPlan {
    int runs = 1;
    int folds = 5;
    std::uint64_t seed = 42;

    void validate() const;  // runs >= 1, folds >= 2
};

struct FoldRecord {
    int run = 0;   // 1-based
    int fold = 0;  // 1-based
    std::string method;
    double rmse = 0.0;
    double mae = 0.0;
    double sera = 0.0;
};

struct MethodSummary {
    std::string method;
    double mean_rmse = 0.0;
    double median_rmse = 0.0;
    double mean_mae = 0.0;
    double median_mae = 0.0;
    double mean_sera = 0.0;
    double median_sera = 0.0;
};

// Per-metric comparison outcome. `winner` is the method with the lower mean
// ("tie" when equal), independent of significance; `comparable` is false
// when every paired difference was zero, leaving nothing to test.
struct MetricVerdict {
    std::string metric;
    std::string winner;
    bool comparable = false;
    double statistic = 0.0;
    double p_value = 1.0;
    bool significant = false;
};

struct EvaluationReport {
    CvPlan plan;
    int learner_k = 5;
    double alpha_level = 0.05;
    std::vector<FoldRecord> records;      // ordered by (run, fold, method)
    std::vector<MethodSummary> summaries; // baseline first, then ldao
    std::vector<MetricVerdict> verdicts;  // rmse, mae, sera

    // Key-value summary block, one `key = value` per line.
    std::string to_text() const;

    // Records as CSV with header `run,fold,method,rmse,mae,sera`.
    void write_records_csv(const std::filesystem::path& path) const;
};

// Test-row index sets of a shuffled fold split: disjoint, covering
// 0..n-1 exactly once, sizes differing by at most one. Reproducible
// from (n, folds, seed) alone.
std::vector<std::vector<Eigen::Index>> cv_partition(Eigen::Index n, int folds,
                                                    std::uint64_t seed);

// Cross-validated baseline-vs-LDAO comparison with a k-NN learner. Per fold:
// fit LDAO on the training rows only, train the learner on raw and on
// augmented data, score both on the held-out rows (relevance for SERA built
// from training targets only), then run the signed-rank test on the paired
// per-fold metric vectors. `threads` as in parallel_for; folds run in
// parallel, assembly is ordered, so results are thread-count independent.
EvaluationReport run_experiment(const Dataset& dataset, const CvPlan& plan,
                                const RunConfig& config, int learner_k = 5,
                                double alpha_level = 0.05, int threads = 0);

} // namespace ldao
