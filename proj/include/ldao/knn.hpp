#pragma once

#include "ldao/dataset.hpp"

#include <Eigen/Dense>

namespace ldao {

// k-nearest-neighbor regression: each prediction is the mean target of the
// k training rows closest in Euclidean distance, computed on features
// z-scored with training statistics only. Equal distances break toward the
// lower training row index. Throws KTooLarge when k > train.rows(),
// DimensionMismatch on column disagreement. `threads` as in parallel_for.
Eigen::VectorXd knn_regress(const Dataset& train, const Eigen::MatrixXd& query_features,
                            int k, int threads = 0);

} // namespace ldao
