#include "ldao/standardize.hpp"

#include "ldao/errors.hpp"

namespace ldao {

StandardizationParams fit_standardization(const Eigen::MatrixXd& joint) {
    if (joint.rows() < 1 || joint.cols() < 1)
        throw ValidationError("cannot fit standardization on an empty matrix");

    StandardizationParams params;
    params.means = joint.colwise().mean();
    Eigen::MatrixXd centered = joint.rowwise() - params.means.transpose();
    params.stds = centered.array().square().colwise().mean().sqrt();

    for (Eigen::Index j = 0; j < params.stds.size(); ++j) {
        if (params.stds[j] <= 0.0) {
            params.stds[j] = 1.0;
            params.degenerate.push_back(static_cast<int>(j));
        }
    }
    return params;
}

Eigen::MatrixXd apply_standardization(const StandardizationParams& params,
                                      const Eigen::MatrixXd& m) {
    if (m.cols() != params.means.size())
        throw DimensionMismatch("matrix has " + std::to_string(m.cols()) +
                                " columns, params expect " + std::to_string(params.means.size()));
    Eigen::MatrixXd out = m.rowwise() - params.means.transpose();
    out.array().rowwise() /= params.stds.transpose().array();
    return out;
}

Eigen::MatrixXd invert_standardization(const StandardizationParams& params,
                                       const Eigen::MatrixXd& m) {
    if (m.cols() != params.means.size())
        throw DimensionMismatch("matrix has " + std::to_string(m.cols()) +
                                " columns, params expect " + std::to_string(params.means.size()));
    Eigen::MatrixXd out = m;
    out.array().rowwise() *= params.stds.transpose().array();
    out.rowwise() += params.means.transpose();
    return out;
}

std::pair<Dataset, StandardizationParams> standardize(const Dataset& ds) {
    Eigen::MatrixXd joint = to_joint(ds);
    StandardizationParams params = fit_standardization(joint);
    Eigen::MatrixXd scaled = apply_standardization(params, joint);

    Dataset out = ds;
    out.features = scaled.leftCols(ds.dims());
    out.target = scaled.col(ds.dims());
    return {std::move(out), std::move(params)};
}

} // namespace ldao
