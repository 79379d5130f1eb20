#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <vector>

namespace ldao {

// sqrt((1/n) * sum (y_i - yhat_i)^2). Throws LengthMismatch, EmptyInput.
double rmse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

// (1/n) * sum |y_i - yhat_i|. Same error contract as rmse.
double mae(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

struct ControlPoint {
    double y = 0.0;
    double phi = 0.0;    // relevance in [0,1]
    double slope = 0.0;  // derivative hint at this point
};

// Monotone piecewise-cubic map phi: R -> [0,1]. Interpolates control points
// exactly with Hermite cubics whose slopes are limited (Fritsch-Carlson) so
// no segment overshoots its endpoint values; constant beyond the outermost
// points. Control points must be strictly increasing in y with phi in [0,1].
class RelevanceFunction {
public:
    explicit RelevanceFunction(std::vector<ControlPoint> points);

    double operator()(double y) const;

    const std::vector<ControlPoint>& control_points() const { return points_; }

    // phi identically `value`; handy for unweighted evaluation.
    static RelevanceFunction constant(double value = 1.0);

private:
    std::vector<ControlPoint> points_;  // slopes already limited
};

// Automatic boxplot relevance: phi = 0 at the median, rising to 1 at the
// whisker fences Q1 - 1.5*IQR and Q3 + 1.5*IQR (clamped to the observed
// extremes when no point falls outside; a collapsed fence falls back to the
// observed extreme, and a side with no spread is dropped). Quartiles use
// linear interpolation between order statistics. Needs n >= 5 and spread;
// throws ZeroSpread when all values are equal.
RelevanceFunction build_relevance(const Eigen::VectorXd& y);

// Control points from a text file, one "y phi slope" triple per line,
// '#' comments and blank lines ignored.
RelevanceFunction load_relevance(const std::filesystem::path& path);

// Squared error-relevance area: the integral over t in [0,1] of
// SER_t = sum of squared errors over points with phi(y_i) >= t, computed by
// the trapezoid rule at the given step. Equals sum e_i^2 * phi(y_i) up to
// integration error. Throws LengthMismatch; step must lie in (0, 0.5].
double sera(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
            const RelevanceFunction& relevance, double step = 0.001);

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double p_value = 1.0;
    bool significant = false;
};

// Two-sided paired signed-rank test. Zero differences are dropped
// (Wilcoxon's original treatment); ties share average ranks. Exact null
// distribution by enumeration for n <= 20, normal approximation with tie
// correction and continuity correction above. Throws LengthMismatch and
// TooFewPairs (fewer than 5 non-zero differences).
WilcoxonResult wilcoxon_signed_rank(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                    double alpha = 0.05);

namespace detail {

// The two p-value branches, split out so they can be cross-checked against
// each other. `ranks2` holds the doubled ranks of |d| (doubling keeps
// tie-averaged ranks integral); `w2_plus` is the doubled positive-rank sum.
double wilcoxon_exact_p(const std::vector<long long>& ranks2, long long w2_plus);
double wilcoxon_normal_p(const std::vector<long long>& ranks2, long long w2_plus);

} // namespace detail

} // namespace ldao
