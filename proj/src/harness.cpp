#include "ldao/harness.hpp"

#include "ldao/augment.hpp"
#include "ldao/errors.hpp"
#include "ldao/knn.hpp"
#include "ldao/metrics.hpp"
#include "ldao/parallel.hpp"
#include "ldao/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace ldao {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Dataset subset(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
    Dataset out;
    out.feature_names = ds.feature_names;
    out.target_name = ds.target_name;
    const auto n = static_cast<Eigen::Index>(rows.size());
    out.features.resize(n, ds.features.cols());
    out.target.resize(n);
    out.synthetic_mask.resize(rows.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = rows[static_cast<std::size_t>(i)];
        out.features.row(i) = ds.features.row(src);
        out.target[i] = ds.target[src];
        out.synthetic_mask[static_cast<std::size_t>(i)] =
            ds.synthetic_mask[static_cast<std::size_t>(src)];
    }
    return out;
}

struct FoldScores {
    double rmse = 0.0;
    double mae = 0.0;
    double sera = 0.0;
};

FoldScores score(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
                 const RelevanceFunction& relevance) {
    return {rmse(y_true, y_pred), mae(y_true, y_pred), sera(y_true, y_pred, relevance)};
}

} // namespace

void CvPlan::validate() const {
    if (runs < 1) throw ValidationError("runs must be at least 1, got " + std::to_string(runs));
    if (folds < 2) throw ValidationError("folds must be at least 2, got " + std::to_string(folds));
}

std::vector<std::vector<Eigen::Index>> cv_partition(Eigen::Index n, int folds,
                                                    std::uint64_t seed) {
    if (folds < 2) throw ValidationError("folds must be at least 2, got " + std::to_string(folds));
    if (n < folds) {
        throw TooFewPoints("cannot split " + std::to_string(n) + " rows into " +
                           std::to_string(folds) + " folds");
    }
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    auto rng = make_engine(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<std::vector<Eigen::Index>> parts(static_cast<std::size_t>(folds));
    std::size_t start = 0;
    for (int f = 0; f < folds; ++f) {
        std::size_t size = static_cast<std::size_t>(n) / static_cast<std::size_t>(folds);
        if (static_cast<std::size_t>(f) < static_cast<std::size_t>(n) % static_cast<std::size_t>(folds)) ++size;
        auto& part = parts[static_cast<std::size_t>(f)];
        part.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                    perm.begin() + static_cast<std::ptrdiff_t>(start + size));
        std::sort(part.begin(), part.end());
        start += size;
    }
    return parts;
}

EvaluationReport run_experiment(const Dataset& dataset, const CvPlan& plan,
                                const RunConfig& config, int learner_k,
                                double alpha_level, int threads) {
    validate(dataset);
    plan.validate();
    validate(config);
    if (learner_k < 1) throw ValidationError("learner k must be at least 1");
    if (!(alpha_level > 0.0 && alpha_level < 1.0)) {
        throw ValidationError("alpha level must be in (0,1)");
    }
    const Eigen::Index n = dataset.rows();
    if (n < static_cast<Eigen::Index>(plan.folds) * 2) {
        throw TooFewPoints("cross-validation needs at least 2 rows per fold: " +
                           std::to_string(n) + " rows, " + std::to_string(plan.folds) + " folds");
    }

    // Partitions fixed up front, then folds run independently; each task
    // owns two preallocated record slots, so assembly order never depends
    // on scheduling.
    std::vector<std::vector<std::vector<Eigen::Index>>> partitions;
    partitions.reserve(static_cast<std::size_t>(plan.runs));
    for (int r = 0; r < plan.runs; ++r) {
        partitions.push_back(cv_partition(n, plan.folds, mix_seed(plan.seed, stream::cv_shuffle,
                                                                  static_cast<std::uint64_t>(r))));
    }

    const std::size_t tasks = static_cast<std::size_t>(plan.runs) * static_cast<std::size_t>(plan.folds);
    EvaluationReport report;
    report.plan = plan;
    report.learner_k = learner_k;
    report.alpha_level = alpha_level;
    report.records.resize(tasks * 2);

    parallel_for(tasks, [&](std::size_t t) {
        const int r = static_cast<int>(t) / plan.folds;
        const int f = static_cast<int>(t) % plan.folds;
        const std::vector<Eigen::Index>& test_rows =
            partitions[static_cast<std::size_t>(r)][static_cast<std::size_t>(f)];

        std::vector<bool> is_test(static_cast<std::size_t>(n), false);
        for (const Eigen::Index i : test_rows) is_test[static_cast<std::size_t>(i)] = true;
        std::vector<Eigen::Index> train_rows;
        train_rows.reserve(static_cast<std::size_t>(n) - test_rows.size());
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!is_test[static_cast<std::size_t>(i)]) train_rows.push_back(i);
        }

        const Dataset train = subset(dataset, train_rows);
        const Dataset test = subset(dataset, test_rows);
        const RelevanceFunction relevance = build_relevance(train.target);

        const Eigen::VectorXd baseline_pred = knn_regress(train, test.features, learner_k, 1);

        RunConfig fold_config = config;
        fold_config.seed = mix_seed(config.seed, stream::cv_fold, t);
        const Dataset augmented = run_ldao(train, fold_config, 1).dataset;
        const Eigen::VectorXd ldao_pred = knn_regress(augmented, test.features, learner_k, 1);

        const FoldScores base = score(test.target, baseline_pred, relevance);
        const FoldScores over = score(test.target, ldao_pred, relevance);
        report.records[t * 2] = {r + 1, f + 1, kBaselineMethod, base.rmse, base.mae, base.sera};
        report.records[t * 2 + 1] = {r + 1, f + 1, kLdaoMethod, over.rmse, over.mae, over.sera};
    }, threads);

    const auto collect = [&](const char* method, auto field) {
        std::vector<double> out;
        out.reserve(tasks);
        for (const FoldRecord& rec : report.records) {
            if (rec.method == method) out.push_back(field(rec));
        }
        return out;
    };
    const auto metric_fields = {
        std::pair<const char*, double FoldRecord::*>{"rmse", &FoldRecord::rmse},
        std::pair<const char*, double FoldRecord::*>{"mae", &FoldRecord::mae},
        std::pair<const char*, double FoldRecord::*>{"sera", &FoldRecord::sera},
    };

    for (const char* method : {kBaselineMethod, kLdaoMethod}) {
        MethodSummary s;
        s.method = method;
        const auto r = collect(method, [](const FoldRecord& rec) { return rec.rmse; });
        const auto m = collect(method, [](const FoldRecord& rec) { return rec.mae; });
        const auto e = collect(method, [](const FoldRecord& rec) { return rec.sera; });
        s.mean_rmse = mean_of(r);
        s.median_rmse = median_of(r);
        s.mean_mae = mean_of(m);
        s.median_mae = median_of(m);
        s.mean_sera = mean_of(e);
        s.median_sera = median_of(e);
        report.summaries.push_back(std::move(s));
    }

    for (const auto& [name, field] : metric_fields) {
        Eigen::VectorXd base(static_cast<Eigen::Index>(tasks));
        Eigen::VectorXd over(static_cast<Eigen::Index>(tasks));
        for (std::size_t t = 0; t < tasks; ++t) {
            base[static_cast<Eigen::Index>(t)] = report.records[t * 2].*field;
            over[static_cast<Eigen::Index>(t)] = report.records[t * 2 + 1].*field;
        }
        MetricVerdict v;
        v.metric = name;
        const double mean_base = base.mean();
        const double mean_over = over.mean();
        v.winner = mean_base < mean_over ? kBaselineMethod
                 : mean_over < mean_base ? kLdaoMethod
                                         : "tie";
        try {
            const WilcoxonResult w = wilcoxon_signed_rank(base, over, alpha_level);
            v.comparable = true;
            v.statistic = w.statistic;
            v.p_value = w.p_value;
            v.significant = w.significant;
        } catch (const TooFewPairs&) {
            v.comparable = false;  // methods agreed on (almost) every fold
        }
        report.verdicts.push_back(std::move(v));
    }
    return report;
}

std::string EvaluationReport::to_text() const {
    std::ostringstream out;
    out << "runs = " << plan.runs << '\n';
    out << "folds = " << plan.folds << '\n';
    out << "seed = " << plan.seed << '\n';
    out << "learner_k = " << learner_k << '\n';
    out << "alpha_level = " << fmt(alpha_level) << '\n';
    out << "records = " << records.size() << '\n';
    for (const MethodSummary& s : summaries) {
        out << s.method << "_mean_rmse = " << fmt(s.mean_rmse) << '\n';
        out << s.method << "_median_rmse = " << fmt(s.median_rmse) << '\n';
        out << s.method << "_mean_mae = " << fmt(s.mean_mae) << '\n';
        out << s.method << "_median_mae = " << fmt(s.median_mae) << '\n';
        out << s.method << "_mean_sera = " << fmt(s.mean_sera) << '\n';
        out << s.method << "_median_sera = " << fmt(s.median_sera) << '\n';
    }
    for (const MetricVerdict& v : verdicts) {
        out << v.metric << "_winner = " << v.winner << '\n';
        out << v.metric << "_comparable = " << (v.comparable ? "yes" : "no") << '\n';
        if (v.comparable) {
            out << v.metric << "_statistic = " << fmt(v.statistic) << '\n';
            out << v.metric << "_p_value = " << fmt(v.p_value) << '\n';
            out << v.metric << "_significant = " << (v.significant ? "yes" : "no") << '\n';
        }
        out << v.metric << "_verdict = "
            << (v.comparable && v.significant ? v.winner + (" significantly better")
                                              : std::string("no significant difference"))
            << '\n';
    }
    return out.str();
}

void EvaluationReport::write_records_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "run,fold,method,rmse,mae,sera\n";
    for (const FoldRecord& rec : records) {
        out << rec.run << ',' << rec.fold << ',' << rec.method << ',' << fmt(rec.rmse) << ','
            << fmt(rec.mae) << ',' << fmt(rec.sera) << '\n';
    }
    if (!out.flush()) throw IoError("failed writing " + path.string());
}

} // namespace ldao
