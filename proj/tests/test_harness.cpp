#include "ldao/augment.hpp"
#include "ldao/errors.hpp"
#include "ldao/harness.hpp"
#include "ldao/knn.hpp"
#include "ldao/metrics.hpp"
#include "ldao/rng.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

using namespace ldao;

TEST_CASE("cv partition covers every row exactly once with balanced folds") {
    const auto parts = cv_partition(103, 5, 9);
    REQUIRE(parts.size() == 5);
    std::set<Eigen::Index> seen;
    for (const auto& part : parts) {
        CHECK(part.size() >= 20);
        CHECK(part.size() <= 21);
        CHECK(std::is_sorted(part.begin(), part.end()));
        for (Eigen::Index i : part) {
            CHECK(i >= 0);
            CHECK(i < 103);
            CHECK(seen.insert(i).second);  // no row in two folds
        }
    }
    CHECK(seen.size() == 103);

    SUBCASE("reproducible from the seed alone") {
        CHECK(cv_partition(103, 5, 9) == parts);
        CHECK(cv_partition(103, 5, 10) != parts);
    }
    SUBCASE("degenerate arguments") {
        CHECK_THROWS_AS(cv_partition(10, 1, 0), ValidationError);
        CHECK_THROWS_AS(cv_partition(3, 5, 0), TooFewPoints);
    }
}

TEST_CASE("knn predicts a training row exactly at k = 1") {
    const Dataset ds = fixtures::random_dataset(30, 3, 5);
    const Eigen::VectorXd pred = knn_regress(ds, ds.features, 1);
    CHECK(pred == ds.target);  // each row is its own nearest neighbor
}

TEST_CASE("knn at k = N predicts the global mean everywhere") {
    const Dataset ds = fixtures::random_dataset(25, 2, 6);
    Eigen::MatrixXd queries = Eigen::MatrixXd::Random(4, 2);
    const Eigen::VectorXd pred = knn_regress(ds, queries, 25);
    const double mean = ds.target.mean();
    for (Eigen::Index i = 0; i < pred.size(); ++i)
        CHECK(pred[i] == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("knn matches the full-sort oracle") {
    const Dataset ds = fixtures::random_dataset(20, 3, 7);
    const Eigen::MatrixXd queries = Eigen::MatrixXd::Random(10, 3) * 2.0;
    const Eigen::VectorXd pred = knn_regress(ds, queries, 3);
    const Eigen::VectorXd expected = oracles::knn_predict(ds.features, ds.target, queries, 3);
    for (Eigen::Index i = 0; i < pred.size(); ++i)
        CHECK(pred[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("knn argument errors") {
    const Dataset ds = fixtures::random_dataset(10, 2, 8);
    CHECK_THROWS_AS(knn_regress(ds, Eigen::MatrixXd::Zero(1, 2), 11), KTooLarge);
    CHECK_THROWS_AS(knn_regress(ds, Eigen::MatrixXd::Zero(1, 3), 2), DimensionMismatch);
    CHECK_THROWS_AS(knn_regress(ds, Eigen::MatrixXd::Zero(1, 2), 0), ValidationError);
}

TEST_CASE("experiment produces one record pair per run and fold") {
    const Dataset ds = fixtures::rare_region(3, 100);
    CvPlan plan;
    plan.runs = 1;
    plan.folds = 5;
    plan.seed = 21;
    RunConfig config;
    config.alpha = 2.0;
    const EvaluationReport report = run_experiment(ds, plan, config);

    REQUIRE(report.records.size() == 10);
    for (std::size_t t = 0; t < 5; ++t) {
        const FoldRecord& base = report.records[t * 2];
        const FoldRecord& over = report.records[t * 2 + 1];
        CHECK(base.run == 1);
        CHECK(base.fold == static_cast<int>(t) + 1);
        CHECK(base.method == kBaselineMethod);
        CHECK(over.fold == base.fold);
        CHECK(over.method == kLdaoMethod);
        for (const FoldRecord* rec : {&base, &over}) {
            CHECK(rec->rmse >= 0.0);
            CHECK(rec->mae <= rec->rmse + 1e-12);
            CHECK(rec->sera >= 0.0);
        }
    }
    REQUIRE(report.summaries.size() == 2);
    CHECK(report.summaries[0].method == kBaselineMethod);
    CHECK(report.summaries[1].method == kLdaoMethod);
    REQUIRE(report.verdicts.size() == 3);
    CHECK(report.verdicts[0].metric == "rmse");
    CHECK(report.verdicts[2].metric == "sera");

    SUBCASE("summaries aggregate the records") {
        double base_rmse_sum = 0.0;
        for (std::size_t t = 0; t < 5; ++t) base_rmse_sum += report.records[t * 2].rmse;
        CHECK(report.summaries[0].mean_rmse == doctest::Approx(base_rmse_sum / 5.0).epsilon(1e-12));
    }
    SUBCASE("text report carries every key") {
        const std::string text = report.to_text();
        for (const char* key :
             {"runs = 1", "folds = 5", "seed = 21", "learner_k = 5", "records = 10",
              "baseline_mean_rmse = ", "ldao_mean_sera = ", "rmse_winner = ",
              "sera_comparable = "}) {
            CAPTURE(key);
            CHECK(text.find(key) != std::string::npos);
        }
    }
    SUBCASE("records csv round-trips the table shape") {
        const std::filesystem::path path =
            std::filesystem::temp_directory_path() / "harness_records.csv";
        report.write_records_csv(path);
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "run,fold,method,rmse,mae,sera");
        int lines = 0;
        while (std::getline(in, line))
            if (!line.empty()) ++lines;
        CHECK(lines == 10);
        std::filesystem::remove(path);
    }
}

TEST_CASE("each fold record is reproducible by hand") {
    const Dataset ds = fixtures::rare_region(11, 100);
    CvPlan plan;
    plan.seed = 33;
    RunConfig config;
    config.seed = 77;
    const EvaluationReport report = run_experiment(ds, plan, config, 4);

    // rebuild fold 3 (task index 2) from the published derivation chain
    const auto parts = cv_partition(100, 5, mix_seed(plan.seed, stream::cv_shuffle, 0));
    const auto& test_rows = parts[2];
    std::vector<Eigen::Index> train_rows;
    std::vector<bool> is_test(100, false);
    for (Eigen::Index i : test_rows) is_test[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < 100; ++i)
        if (!is_test[static_cast<std::size_t>(i)]) train_rows.push_back(i);

    Dataset train, test;
    train.feature_names = test.feature_names = ds.feature_names;
    train.target_name = test.target_name = ds.target_name;
    train.features.resize(static_cast<Eigen::Index>(train_rows.size()), ds.dims());
    train.target.resize(static_cast<Eigen::Index>(train_rows.size()));
    train.synthetic_mask.assign(train_rows.size(), false);
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        train.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(train_rows[i]);
        train.target[static_cast<Eigen::Index>(i)] = ds.target[train_rows[i]];
    }
    test.features.resize(static_cast<Eigen::Index>(test_rows.size()), ds.dims());
    test.target.resize(static_cast<Eigen::Index>(test_rows.size()));
    test.synthetic_mask.assign(test_rows.size(), false);
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
        test.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(test_rows[i]);
        test.target[static_cast<Eigen::Index>(i)] = ds.target[test_rows[i]];
    }

    const RelevanceFunction relevance = build_relevance(train.target);
    const Eigen::VectorXd base_pred = knn_regress(train, test.features, 4);
    RunConfig fold_config = config;
    fold_config.seed = mix_seed(config.seed, stream::cv_fold, 2);
    const Dataset augmented = run_ldao(train, fold_config).dataset;
    const Eigen::VectorXd ldao_pred = knn_regress(augmented, test.features, 4);

    const FoldRecord& base = report.records[4];
    CHECK(base.fold == 3);
    CHECK(base.rmse == rmse(test.target, base_pred));
    CHECK(base.mae == mae(test.target, base_pred));
    CHECK(base.sera == sera(test.target, base_pred, relevance));
    const FoldRecord& over = report.records[5];
    CHECK(over.rmse == rmse(test.target, ldao_pred));
    CHECK(over.sera == sera(test.target, ldao_pred, relevance));
}

TEST_CASE("alpha one reduces the comparison to baseline against itself") {
    const Dataset ds = fixtures::rare_region(5, 80);
    CvPlan plan;
    RunConfig config;
    config.alpha = 1.0;  // augmentation is the identity
    const EvaluationReport report = run_experiment(ds, plan, config);
    for (const MetricVerdict& v : report.verdicts) {
        CHECK_FALSE(v.comparable);
        CHECK_FALSE(v.significant);
        CHECK(v.winner == "tie");
    }
    const std::string text = report.to_text();
    CHECK(text.find("rmse_comparable = no") != std::string::npos);
    CHECK(text.find("rmse_p_value") == std::string::npos);
    CHECK(text.find("sera_verdict = no significant difference") != std::string::npos);
}

TEST_CASE("experiment reports are identical across worker counts") {
    const Dataset ds = fixtures::rare_region(13, 90);
    CvPlan plan;
    plan.seed = 4;
    RunConfig config;
    const EvaluationReport one = run_experiment(ds, plan, config, 5, 0.05, 1);
    const EvaluationReport eight = run_experiment(ds, plan, config, 5, 0.05, 8);
    CHECK(one.to_text() == eight.to_text());
    REQUIRE(one.records.size() == eight.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
        CHECK(one.records[i].rmse == eight.records[i].rmse);
        CHECK(one.records[i].mae == eight.records[i].mae);
        CHECK(one.records[i].sera == eight.records[i].sera);
    }
}

TEST_CASE("experiment argument validation") {
    const Dataset ds = fixtures::rare_region(7, 60);
    CvPlan plan;
    RunConfig config;
    CHECK_THROWS_AS(run_experiment(ds, plan, config, 0), ValidationError);
    CHECK_THROWS_AS(run_experiment(ds, plan, config, 5, 1.0), ValidationError);
    plan.folds = 40;  // 60 rows cannot give 2 per fold
    CHECK_THROWS_AS(run_experiment(ds, plan, config), TooFewPoints);
}
