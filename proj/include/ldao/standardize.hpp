#pragma once

#include "ldao/dataset.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace ldao {

// Per-column z-score parameters for the joint space. Population (1/N)
// standard deviation; constant columns keep std 1 and are listed as
// degenerate so scaling is a no-op there.
struct StandardizationParams {
    Eigen::VectorXd means;        // d+1
    Eigen::VectorXd stds;         // d+1, strictly positive
    std::vector<int> degenerate;  // indices of constant columns
};

StandardizationParams fit_standardization(const Eigen::MatrixXd& joint);

// (m - mean) / std, column-wise.
Eigen::MatrixXd apply_standardization(const StandardizationParams& params,
                                      const Eigen::MatrixXd& m);

// Exact inverse of apply_standardization up to rounding.
Eigen::MatrixXd invert_standardization(const StandardizationParams& params,
                                       const Eigen::MatrixXd& m);

// Standardizes all d+1 joint columns of a dataset. The returned params
// suffice to invert; round-trip error stays below 1e-12 relative.
std::pair<Dataset, StandardizationParams> standardize(const Dataset& ds);

} // namespace ldao
