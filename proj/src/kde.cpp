#include "ldao/kde.hpp"

#include "ldao/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ldao {

ClusterKde select_bandwidth(const Eigen::MatrixXd& members, double scale, double lambda_floor) {
    const Eigen::Index n = members.rows();
    const Eigen::Index dim = members.cols();
    if (n < 1) throw ValidationError("bandwidth selection needs at least one member point");
    if (!(scale > 0.0)) throw ValidationError("bandwidth scale must be > 0");
    if (!(lambda_floor > 0.0)) throw ValidationError("lambda floor must be > 0");

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
    if (n > 1) {
        Eigen::MatrixXd centered = members.rowwise() - members.colwise().mean();
        cov = centered.transpose() * centered / static_cast<double>(n - 1);
    }

    const double s = std::pow(static_cast<double>(n), -1.0 / static_cast<double>(dim + 4));
    const double factor = (scale * s) * (scale * s);

    double lambda = std::max(lambda_floor, 1e-6 * cov.trace() / static_cast<double>(dim));
    for (int attempt = 0;; ++attempt) {
        Eigen::MatrixXd h = factor * (cov + lambda * Eigen::MatrixXd::Identity(dim, dim));
        Eigen::LLT<Eigen::MatrixXd> llt(h);
        if (llt.info() == Eigen::Success) {
            ClusterKde kde;
            kde.points = members;
            kde.bandwidth_chol = llt.matrixL();
            kde.lambda = lambda;
            kde.log_norm_const = 0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi) +
                                 kde.bandwidth_chol.diagonal().array().log().sum();
            return kde;
        }
        if (attempt >= 3)
            throw CholeskyFailure("bandwidth matrix not positive definite even with ridge " +
                                  std::to_string(lambda));
        lambda *= 10.0;
    }
}

double density(const ClusterKde& kde, const Eigen::VectorXd& z) {
    if (z.size() != kde.dim())
        throw DimensionMismatch("point has dimension " + std::to_string(z.size()) +
                                ", kde expects " + std::to_string(kde.dim()));
    const auto lower = kde.bandwidth_chol.triangularView<Eigen::Lower>();
    double sum = 0.0;
    Eigen::VectorXd diff(kde.dim());
    for (Eigen::Index j = 0; j < kde.size(); ++j) {
        diff = z - kde.points.row(j).transpose();
        const double quad = lower.solve(diff).squaredNorm();
        sum += std::exp(-0.5 * quad - kde.log_norm_const);
    }
    return sum / static_cast<double>(kde.size());
}

Eigen::MatrixXd sample(const ClusterKde& kde, std::size_t count, std::mt19937_64& rng) {
    const Eigen::Index dim = kde.dim();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(count), dim);
    std::uniform_int_distribution<Eigen::Index> pick(0, kde.size() - 1);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::VectorXd eps(dim);
    for (std::size_t i = 0; i < count; ++i) {
        const Eigen::Index j = pick(rng);
        for (Eigen::Index c = 0; c < dim; ++c) eps[c] = gauss(rng);
        out.row(static_cast<Eigen::Index>(i)) =
            kde.points.row(j) + (kde.bandwidth_chol.triangularView<Eigen::Lower>() * eps).transpose();
    }
    return out;
}

} // namespace ldao
