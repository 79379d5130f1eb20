#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <random>

namespace ldao {

constexpr double kDefaultLambdaFloor = 1e-8;

// Gaussian KDE over one cluster's joint points. The bandwidth matrix H is
// held as its lower Cholesky factor L (H = L L^T, strictly positive
// diagonal); density and sampling never form H^-1 explicitly.
struct ClusterKde {
    Eigen::MatrixXd points;          // n_k x dim member joint points
    Eigen::MatrixXd bandwidth_chol;  // dim x dim lower triangular
    double log_norm_const = 0.0;     // log((2*pi)^{dim/2} |H|^{1/2})
    double lambda = 0.0;             // ridge actually applied to the covariance

    Eigen::Index dim() const { return points.cols(); }
    Eigen::Index size() const { return points.rows(); }
};

// Rule-of-thumb bandwidth: H = (scale * s)^2 * (Cov + lambda*I) with the
// Scott-type factor s = n^{-1/(dim+4)} and sample (1/(n-1)) covariance
// (zero when n = 1). lambda = max(lambda_floor, 1e-6 * trace(Cov)/dim).
// A failed factorization retries with lambda*10 up to 3 times, then throws
// CholeskyFailure.
ClusterKde select_bandwidth(const Eigen::MatrixXd& members, double scale,
                            double lambda_floor = kDefaultLambdaFloor);

// Mixture-of-kernels density (1/n) * sum_j K(z - z_j), evaluated through
// triangular solves against L. Throws DimensionMismatch.
double density(const ClusterKde& kde, const Eigen::VectorXd& z);

// `count` draws of z* = z_j + L*eps with j uniform over members and
// eps ~ N(0, I). One row per draw; deterministic given the engine state.
Eigen::MatrixXd sample(const ClusterKde& kde, std::size_t count, std::mt19937_64& rng);

} // namespace ldao
