#include "ldao/knn.hpp"

#include "ldao/errors.hpp"
#include "ldao/parallel.hpp"
#include "ldao/standardize.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace ldao {

Eigen::VectorXd knn_regress(const Dataset& train, const Eigen::MatrixXd& query_features,
                            int k, int threads) {
    validate(train);
    if (k < 1) throw ValidationError("k must be at least 1, got " + std::to_string(k));
    if (k > train.rows()) {
        throw KTooLarge("k = " + std::to_string(k) + " exceeds training size " +
                        std::to_string(train.rows()));
    }
    if (query_features.cols() != train.features.cols()) {
        throw DimensionMismatch("query has " + std::to_string(query_features.cols()) +
                                " columns, training data has " +
                                std::to_string(train.features.cols()));
    }
    if (!query_features.allFinite()) throw ValidationError("non-finite query feature");

    const StandardizationParams params = fit_standardization(train.features);
    const Eigen::MatrixXd ref = apply_standardization(params, train.features);
    const Eigen::MatrixXd queries = apply_standardization(params, query_features);

    const auto n_train = ref.rows();
    const auto n_query = queries.rows();
    Eigen::VectorXd predictions(n_query);
    parallel_for(static_cast<std::size_t>(n_query), [&](std::size_t q) {
        std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n_train));
        for (Eigen::Index i = 0; i < n_train; ++i) {
            const double d2 = (ref.row(i) - queries.row(static_cast<Eigen::Index>(q))).squaredNorm();
            dist[static_cast<std::size_t>(i)] = {d2, i};
        }
        // (distance, index) pairs are distinct, so nth_element selects the
        // same k rows regardless of input order: ties break toward lower index.
        std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
        double sum = 0.0;
        for (int j = 0; j < k; ++j) sum += train.target[dist[static_cast<std::size_t>(j)].second];
        predictions[static_cast<Eigen::Index>(q)] = sum / static_cast<double>(k);
    }, threads);
    return predictions;
}

} // namespace ldao
