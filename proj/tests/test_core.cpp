#include "ldao/config.hpp"
#include "ldao/dataset.hpp"
#include "ldao/errors.hpp"
#include "ldao/parallel.hpp"
#include "ldao/rng.hpp"
#include "ldao/standardize.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

using namespace ldao;

namespace {

Dataset tiny_dataset() {
    Dataset ds;
    ds.features.resize(2, 2);
    ds.features << 1.0, 2.0, 3.0, 4.0;
    ds.target.resize(2);
    ds.target << 7.0, 8.0;
    ds.feature_names = {"a", "b"};
    ds.target_name = "y";
    ds.synthetic_mask = {false, false};
    return ds;
}

} // namespace

TEST_CASE("dataset validation enforces the structural invariants") {
    Dataset ds = tiny_dataset();
    CHECK_NOTHROW(validate(ds));

    SUBCASE("NaN rejected") {
        ds.features(0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(validate(ds), ValidationError);
    }
    SUBCASE("infinite target rejected") {
        ds.target[1] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(validate(ds), ValidationError);
    }
    SUBCASE("duplicate feature names rejected") {
        ds.feature_names = {"a", "a"};
        CHECK_THROWS_AS(validate(ds), ValidationError);
    }
    SUBCASE("feature name colliding with target rejected") {
        ds.feature_names = {"a", "y"};
        CHECK_THROWS_AS(validate(ds), ValidationError);
    }
    SUBCASE("mask length must match rows") {
        ds.synthetic_mask = {false};
        CHECK_THROWS_AS(validate(ds), ValidationError);
    }
    SUBCASE("target length must match rows") {
        ds.target.resize(3);
        ds.target << 1.0, 2.0, 3.0;
        CHECK_THROWS_AS(validate(ds), ValidationError);
    }
    SUBCASE("empty dataset rejected") {
        Dataset empty;
        CHECK_THROWS_AS(validate(empty), ValidationError);
    }
}

TEST_CASE("to_joint concatenates features with the target") {
    Dataset ds;
    ds.features.resize(1, 2);
    ds.features << 1.0, 2.0;
    ds.target.resize(1);
    ds.target << 7.0;
    ds.feature_names = {"a", "b"};
    ds.target_name = "y";
    ds.synthetic_mask = {false};

    const Eigen::MatrixXd joint = to_joint(ds);
    REQUIRE(joint.rows() == 1);
    REQUIRE(joint.cols() == 3);
    CHECK(joint(0, 0) == 1.0);
    CHECK(joint(0, 1) == 2.0);
    CHECK(joint(0, 2) == 7.0);
}

TEST_CASE("to_joint handles the one-feature zero case") {
    Dataset ds;
    ds.features = Eigen::MatrixXd::Zero(1, 1);
    ds.target = Eigen::VectorXd::Zero(1);
    ds.feature_names = {"x"};
    ds.target_name = "y";
    ds.synthetic_mask = {false};

    const Eigen::MatrixXd joint = to_joint(ds);
    REQUIRE(joint.cols() == 2);
    CHECK(joint(0, 0) == 0.0);
    CHECK(joint(0, 1) == 0.0);
}

TEST_CASE("to_joint preserves row order and count on a 506x13 table") {
    const Dataset ds = fixtures::random_dataset(506, 13, 11);
    const Eigen::MatrixXd joint = to_joint(ds);
    REQUIRE(joint.rows() == 506);
    REQUIRE(joint.cols() == 14);
    for (const Eigen::Index i : {Eigen::Index{0}, Eigen::Index{250}, Eigen::Index{505}}) {
        CHECK(joint.row(i).head(13) == ds.features.row(i));
        CHECK(joint(i, 13) == ds.target[i]);
    }
}

TEST_CASE("standardization uses the population std") {
    Eigen::MatrixXd column(2, 1);
    column << 2.0, 4.0;
    const StandardizationParams params = fit_standardization(column);
    CHECK(params.means[0] == doctest::Approx(3.0));
    CHECK(params.stds[0] == doctest::Approx(1.0));  // population std of {2,4}

    const Eigen::MatrixXd scaled = apply_standardization(params, column);
    CHECK(scaled(0, 0) == doctest::Approx(-1.0));
    CHECK(scaled(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("constant columns pass through standardization unchanged") {
    Eigen::MatrixXd column(3, 1);
    column << 5.0, 5.0, 5.0;
    const StandardizationParams params = fit_standardization(column);
    CHECK(params.stds[0] == 1.0);
    REQUIRE(params.degenerate.size() == 1);
    CHECK(params.degenerate[0] == 0);

    const Eigen::MatrixXd scaled = apply_standardization(params, column);
    CHECK(scaled(0, 0) == 0.0);
    CHECK(scaled(2, 0) == 0.0);
    const Eigen::MatrixXd back = invert_standardization(params, scaled);
    CHECK(back(1, 0) == 5.0);
}

TEST_CASE("standardization round-trips a random 20x4 matrix") {
    const Dataset ds = fixtures::random_dataset(20, 3, 99);  // joint width 4
    const Eigen::MatrixXd joint = to_joint(ds);
    const StandardizationParams params = fit_standardization(joint);
    const Eigen::MatrixXd back =
        invert_standardization(params, apply_standardization(params, joint));
    CHECK((back - joint).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("standardize(Dataset) zero-means and unit-scales every joint column") {
    const Dataset ds = fixtures::random_dataset(50, 4, 123);
    const auto [scaled, params] = standardize(ds);
    const Eigen::MatrixXd joint = to_joint(scaled);
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
        CHECK(std::abs(joint.col(j).mean()) < 1e-12);
        const double var = (joint.col(j).array() - joint.col(j).mean()).square().mean();
        CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(params.means.size() == 5);
}

TEST_CASE("config validation rejects structurally invalid values") {
    RunConfig good;
    CHECK_NOTHROW(validate(good));

    auto expect_invalid = [](auto mutate) {
        RunConfig config;
        mutate(config);
        CHECK_THROWS_AS(validate(config), ValidationError);
    };
    expect_invalid([](RunConfig& c) { c.k_min = 0; });
    expect_invalid([](RunConfig& c) { c.k_max = c.k_min - 1; });
    expect_invalid([](RunConfig& c) { c.elbow_threshold = 0.0; });
    expect_invalid([](RunConfig& c) { c.elbow_threshold = 1.0; });
    expect_invalid([](RunConfig& c) { c.alpha = 0.99; });
    expect_invalid([](RunConfig& c) { c.alpha_max = 0.5; });
    expect_invalid([](RunConfig& c) { c.gamma = -0.1; });
    expect_invalid([](RunConfig& c) { c.bandwidth_scale = 0.0; });
    expect_invalid([](RunConfig& c) { c.restarts = 0; });
    expect_invalid([](RunConfig& c) { c.max_iterations = 0; });
    expect_invalid([](RunConfig& c) { c.tolerance = 0.0; });
}

TEST_CASE("out-of-range but valid settings are flagged, not rejected") {
    RunConfig config;
    CHECK(range_warnings(config).empty());

    config.k_max = 9;
    config.alpha = 5.0;
    config.bandwidth_scale = 0.01;
    CHECK_NOTHROW(validate(config));
    const auto warnings = range_warnings(config);
    CHECK(warnings.size() == 3);
}

TEST_CASE("alpha mode names round-trip") {
    CHECK(to_string(AlphaMode::uniform) == "uniform");
    CHECK(to_string(AlphaMode::adaptive) == "adaptive");
    CHECK(alpha_mode_from_string("adaptive") == AlphaMode::adaptive);
    CHECK_THROWS_AS(alpha_mode_from_string("bogus"), ValidationError);
}

TEST_CASE("mix_seed separates streams and indices") {
    const std::uint64_t base = mix_seed(42, stream::sampling, 0);
    CHECK(mix_seed(42, stream::sampling, 0) == base);  // pure
    std::set<std::uint64_t> seen;
    for (std::uint64_t tag : {stream::kmeans_fit, stream::kmeans_restart, stream::sampling,
                              stream::cv_shuffle, stream::cv_fold}) {
        for (std::uint64_t index = 0; index < 20; ++index) {
            seen.insert(mix_seed(42, tag, index));
        }
    }
    CHECK(seen.size() == 100);  // no collisions across tags or indices
    CHECK(mix_seed(43, stream::sampling, 0) != base);
}

TEST_CASE("parallel_for covers every index exactly once for any worker count") {
    constexpr std::size_t n = 1000;
    for (int threads : {1, 2, 7}) {
        std::vector<int> hits(n, 0);
        parallel_for(n, [&](std::size_t i) { ++hits[i]; }, threads);
        CHECK(std::accumulate(hits.begin(), hits.end(), 0) == static_cast<int>(n));
        CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
    }
    CHECK_NOTHROW(parallel_for(0, [](std::size_t) { throw std::runtime_error("unreachable"); }));
}

TEST_CASE("parallel_for rethrows the first worker exception") {
    CHECK_THROWS_AS(
        parallel_for(100, [](std::size_t i) {
            if (i == 37) throw ValidationError("boom");
        }, 4),
        ValidationError);
}

TEST_CASE("LDAO_THREADS caps the worker count") {
    const char* saved = std::getenv("LDAO_THREADS");
    const std::string original = saved == nullptr ? "" : saved;

    setenv("LDAO_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    setenv("LDAO_THREADS", "0", 1);
    CHECK(worker_count() >= 1);  // auto
    setenv("LDAO_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);  // unparsable falls back to auto

    if (original.empty())
        unsetenv("LDAO_THREADS");
    else
        setenv("LDAO_THREADS", original.c_str(), 1);
}
