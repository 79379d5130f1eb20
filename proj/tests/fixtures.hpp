#pragma once

#include "ldao/dataset.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace fixtures {

// Dataset whose joint space is `centers.rows()` Gaussian blobs: each blob
// contributes per_blob points N(center, sigma^2 I). The first
// centers.cols()-1 coordinates become features, the last the target.
inline ldao::Dataset blobs(const Eigen::MatrixXd& centers, int per_blob, double sigma,
                           std::uint64_t seed) {
    const Eigen::Index dims = centers.cols();
    const Eigen::Index n = centers.rows() * per_blob;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);

    ldao::Dataset ds;
    ds.features.resize(n, dims - 1);
    ds.target.resize(n);
    for (Eigen::Index b = 0; b < centers.rows(); ++b) {
        for (int i = 0; i < per_blob; ++i) {
            const Eigen::Index row = b * per_blob + i;
            for (Eigen::Index c = 0; c + 1 < dims; ++c)
                ds.features(row, c) = centers(b, c) + noise(rng);
            ds.target[row] = centers(b, dims - 1) + noise(rng);
        }
    }
    for (Eigen::Index c = 0; c + 1 < dims; ++c)
        ds.feature_names.push_back("x" + std::to_string(c));
    ds.target_name = "y";
    ds.synthetic_mask.assign(static_cast<std::size_t>(n), false);
    return ds;
}

// Three blobs in 6D joint space (5 features + target) whose centers form an
// equilateral triangle with pairwise distance `separation`. Every joint axis
// sees the same center values {0, s, 2s}, so column standardization rescales
// all axes equally and the blobs stay isotropic.
inline ldao::Dataset three_blobs(std::uint64_t seed, int per_blob = 60, double sigma = 1.0,
                                 double separation = 10.0) {
    const double s = separation / (2.0 * std::sqrt(3.0));
    Eigen::MatrixXd centers(3, 6);
    centers << 0.0, s, 2.0 * s, 0.0, s, 2.0 * s,
               s, 2.0 * s, 0.0, s, 2.0 * s, 0.0,
               2.0 * s, 0.0, s, 2.0 * s, 0.0, s;
    return blobs(centers, per_blob, sigma, seed);
}

inline ldao::Dataset random_dataset(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ldao::Dataset ds;
    ds.features.resize(n, d);
    ds.target.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) ds.features(i, j) = gauss(rng);
        ds.target[i] = gauss(rng);
    }
    for (Eigen::Index j = 0; j < d; ++j) ds.feature_names.push_back("x" + std::to_string(j));
    ds.target_name = "y";
    ds.synthetic_mask.assign(static_cast<std::size_t>(n), false);
    return ds;
}

// Imbalanced regression task: a dense bulk on U[0,1]^3 following one linear
// law and a far-away rare regime on U[4,5]^3 following a steeper one. The
// rare targets sit beyond the bulk's boxplot fence, so relevance there is 1.
inline ldao::Dataset rare_region(std::uint64_t seed, int n = 500, double rare_fraction = 0.05,
                                 double noise_sigma = 0.2) {
    const int n_rare = static_cast<int>(std::lround(n * rare_fraction));
    const int n_bulk = n - n_rare;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, noise_sigma);

    ldao::Dataset ds;
    ds.features.resize(n, 3);
    ds.target.resize(n);
    for (int i = 0; i < n_bulk; ++i) {
        const double x1 = unit(rng), x2 = unit(rng), x3 = unit(rng);
        ds.features.row(i) << x1, x2, x3;
        ds.target[i] = 2.0 * x1 + x2 - x3 + noise(rng);
    }
    for (int i = n_bulk; i < n; ++i) {
        const double x1 = 4.0 + unit(rng), x2 = 4.0 + unit(rng), x3 = 4.0 + unit(rng);
        ds.features.row(i) << x1, x2, x3;
        ds.target[i] = 15.0 + 4.0 * (x1 - 4.0) + noise(rng);
    }
    ds.feature_names = {"x0", "x1", "x2"};
    ds.target_name = "y";
    ds.synthetic_mask.assign(static_cast<std::size_t>(n), false);
    return ds;
}

} // namespace fixtures
