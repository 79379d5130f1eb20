#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ldao {

// Tabular regression dataset: N rows of d features plus one target column.
// Immutable by convention after construction; all pipeline stages copy.
struct Dataset {
    Eigen::MatrixXd features;                // N x d
    Eigen::VectorXd target;                  // N
    std::vector<std::string> feature_names;  // d entries
    std::string target_name;
    std::vector<bool> synthetic_mask;        // true = generated row

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index dims() const { return features.cols(); }
};

// Throws ValidationError unless N >= 1, d >= 1, every value is finite,
// feature names are unique and distinct from the target name, and the
// synthetic mask has one entry per row.
void validate(const Dataset& ds);

// Joint embedding: row i of the result is (x_i, y_i), an N x (d+1) matrix.
// Row order matches the dataset; the last column is the target.
Eigen::MatrixXd to_joint(const Dataset& ds);

} // namespace ldao
