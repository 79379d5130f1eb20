#include "ldao/dataset.hpp"

#include "ldao/errors.hpp"

#include <unordered_set>

namespace ldao {

void validate(const Dataset& ds) {
    const Eigen::Index n = ds.features.rows();
    const Eigen::Index d = ds.features.cols();
    if (n < 1) throw ValidationError("dataset must contain at least one row");
    if (d < 1) throw ValidationError("dataset must contain at least one feature column");
    if (ds.target.size() != n)
        throw ValidationError("target length " + std::to_string(ds.target.size()) +
                              " does not match row count " + std::to_string(n));
    if (!ds.features.allFinite() || !ds.target.allFinite())
        throw ValidationError("dataset contains NaN or infinite values");
    if (static_cast<Eigen::Index>(ds.feature_names.size()) != d)
        throw ValidationError("expected " + std::to_string(d) + " feature names, got " +
                              std::to_string(ds.feature_names.size()));
    if (ds.synthetic_mask.size() != static_cast<std::size_t>(n))
        throw ValidationError("synthetic mask length does not match row count");

    std::unordered_set<std::string> seen;
    for (const auto& name : ds.feature_names) {
        if (name == ds.target_name)
            throw ValidationError("feature name \"" + name + "\" collides with the target name");
        if (!seen.insert(name).second)
            throw ValidationError("duplicate feature name \"" + name + "\"");
    }
}

Eigen::MatrixXd to_joint(const Dataset& ds) {
    validate(ds);
    const Eigen::Index n = ds.rows();
    const Eigen::Index d = ds.dims();
    Eigen::MatrixXd joint(n, d + 1);
    joint.leftCols(d) = ds.features;
    joint.col(d) = ds.target;
    return joint;
}

} // namespace ldao
