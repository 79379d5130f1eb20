#include "ldao/metrics.hpp"

#include "ldao/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

namespace ldao {

namespace {

void check_pair(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw LengthMismatch("vector lengths differ: " + std::to_string(y_true.size()) +
                             " vs " + std::to_string(y_pred.size()));
    }
    if (y_true.size() == 0) throw EmptyInput("empty metric input");
}

// Linear interpolation between order statistics: h = (n-1)p.
double quantile_sorted(const std::vector<double>& v, double p) {
    const double h = static_cast<double>(v.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

constexpr double kFenceMultiplier = 1.5;

} // namespace

double rmse(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    check_pair(y_true, y_pred);
    return std::sqrt((y_true - y_pred).squaredNorm() / static_cast<double>(y_true.size()));
}

double mae(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    check_pair(y_true, y_pred);
    return (y_true - y_pred).cwiseAbs().sum() / static_cast<double>(y_true.size());
}

RelevanceFunction::RelevanceFunction(std::vector<ControlPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ValidationError("relevance needs at least one control point");
    std::sort(points_.begin(), points_.end(),
              [](const ControlPoint& a, const ControlPoint& b) { return a.y < b.y; });
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const ControlPoint& p = points_[i];
        if (!std::isfinite(p.y) || !std::isfinite(p.phi) || !std::isfinite(p.slope)) {
            throw ValidationError("non-finite relevance control point");
        }
        if (p.phi < 0.0 || p.phi > 1.0) {
            throw ValidationError("relevance value " + std::to_string(p.phi) + " outside [0,1]");
        }
        if (i > 0 && !(points_[i - 1].y < p.y)) {
            throw ValidationError("relevance control points must have strictly increasing y");
        }
    }

    // Fritsch-Carlson limiting: slopes that oppose the segment's secant are
    // zeroed, and (m0/d, m1/d) is pulled inside the radius-3 disk. The
    // resulting cubic on each segment stays within its endpoint values.
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        ControlPoint& a = points_[i];
        ControlPoint& b = points_[i + 1];
        const double secant = (b.phi - a.phi) / (b.y - a.y);
        if (secant == 0.0) {
            a.slope = 0.0;
            b.slope = 0.0;
            continue;
        }
        if (a.slope / secant < 0.0) a.slope = 0.0;
        if (b.slope / secant < 0.0) b.slope = 0.0;
        const double r = a.slope / secant;
        const double s = b.slope / secant;
        const double norm2 = r * r + s * s;
        if (norm2 > 9.0) {
            const double tau = 3.0 / std::sqrt(norm2);
            a.slope = tau * r * secant;
            b.slope = tau * s * secant;
        }
    }
}

double RelevanceFunction::operator()(double y) const {
    if (y <= points_.front().y) return points_.front().phi;
    if (y >= points_.back().y) return points_.back().phi;
    const auto it = std::upper_bound(points_.begin(), points_.end(), y,
                                     [](double v, const ControlPoint& p) { return v < p.y; });
    const ControlPoint& b = *it;
    const ControlPoint& a = *(it - 1);
    const double h = b.y - a.y;
    const double t = (y - a.y) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double value = (2.0 * t3 - 3.0 * t2 + 1.0) * a.phi + (t3 - 2.0 * t2 + t) * h * a.slope +
                         (-2.0 * t3 + 3.0 * t2) * b.phi + (t3 - t2) * h * b.slope;
    return std::clamp(value, 0.0, 1.0);
}

RelevanceFunction RelevanceFunction::constant(double value) {
    return RelevanceFunction({{0.0, value, 0.0}});
}

RelevanceFunction build_relevance(const Eigen::VectorXd& y) {
    if (y.size() < 5) {
        throw TooFewPoints("relevance construction needs at least 5 values, got " +
                           std::to_string(y.size()));
    }
    if (!y.allFinite()) throw ValidationError("non-finite target value in relevance input");

    std::vector<double> sorted(y.data(), y.data() + y.size());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (lo == hi) throw ZeroSpread("all target values equal; relevance undefined");

    const double median = quantile_sorted(sorted, 0.5);
    const double q1 = quantile_sorted(sorted, 0.25);
    const double q3 = quantile_sorted(sorted, 0.75);
    const double iqr = q3 - q1;

    // Whisker fences, pulled in to the observed extremes when nothing lies
    // beyond them; a fence that collapses onto the median falls back to the
    // extreme, and a side with no spread at all contributes no point.
    double low_fence = std::max(q1 - kFenceMultiplier * iqr, lo);
    double high_fence = std::min(q3 + kFenceMultiplier * iqr, hi);
    if (low_fence >= median) low_fence = lo;
    if (high_fence <= median) high_fence = hi;

    std::vector<ControlPoint> points;
    if (low_fence < median) points.push_back({low_fence, 1.0, 0.0});
    points.push_back({median, 0.0, 0.0});
    if (high_fence > median) points.push_back({high_fence, 1.0, 0.0});
    if (points.size() == 1) throw ZeroSpread("no spread on either side of the median");
    return RelevanceFunction(std::move(points));
}

RelevanceFunction load_relevance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open relevance file " + path.string());
    std::vector<ControlPoint> points;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        ControlPoint p;
        if (!(fields >> p.y)) continue;  // blank or comment-only line
        std::string extra;
        if (!(fields >> p.phi >> p.slope) || (fields >> extra)) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected three numbers \"y phi slope\"");
        }
        points.push_back(p);
    }
    if (points.empty()) throw ValidationError(path.string() + ": no control points");
    return RelevanceFunction(std::move(points));
}

double sera(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred,
            const RelevanceFunction& relevance, double step) {
    if (y_true.size() != y_pred.size()) {
        throw LengthMismatch("vector lengths differ: " + std::to_string(y_true.size()) +
                             " vs " + std::to_string(y_pred.size()));
    }
    if (!(step > 0.0 && step <= 0.5)) throw ValidationError("integration step must be in (0, 0.5]");
    const auto n = y_true.size();
    if (n == 0) return 0.0;

    // SER_t = sum of squared errors over points with phi(y) >= t. Sorting by
    // phi turns every threshold lookup into a suffix sum.
    std::vector<std::pair<double, double>> by_phi(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double e = y_pred[i] - y_true[i];
        by_phi[static_cast<std::size_t>(i)] = {relevance(y_true[i]), e * e};
    }
    std::sort(by_phi.begin(), by_phi.end());
    std::vector<double> suffix(by_phi.size() + 1, 0.0);
    for (std::size_t i = by_phi.size(); i-- > 0;) suffix[i] = suffix[i + 1] + by_phi[i].second;

    const long m = std::max(2L, std::lround(1.0 / step));
    double integral = 0.0;
    for (long j = 0; j <= m; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(m);
        const auto it = std::lower_bound(by_phi.begin(), by_phi.end(), t,
                                         [](const auto& pair, double v) { return pair.first < v; });
        const double ser_t = suffix[static_cast<std::size_t>(it - by_phi.begin())];
        const double weight = (j == 0 || j == m) ? 0.5 : 1.0;
        integral += weight * ser_t;
    }
    return integral / static_cast<double>(m);
}

namespace {

// Ranks of |d| doubled so that average ranks of ties stay integral: a tie
// run of length L starting at 1-based rank r gets 2r + L - 1 apiece.
std::vector<long long> doubled_ranks(const std::vector<double>& abs_diffs) {
    const std::size_t n = abs_diffs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_diffs[a] < abs_diffs[b]; });
    std::vector<long long> ranks(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diffs[order[j + 1]] == abs_diffs[order[i]]) ++j;
        const long long doubled = 2 * static_cast<long long>(i + 1) + static_cast<long long>(j - i);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
        i = j + 1;
    }
    return ranks;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

namespace detail {

double wilcoxon_exact_p(const std::vector<long long>& ranks2, long long w2_plus) {
    const std::size_t n = ranks2.size();
    const std::uint64_t patterns = std::uint64_t{1} << n;
    std::uint64_t count_le = 0;
    std::uint64_t count_ge = 0;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        long long sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) sum += ranks2[i];
        }
        if (sum <= w2_plus) ++count_le;
        if (sum >= w2_plus) ++count_ge;
    }
    const double tail = static_cast<double>(std::min(count_le, count_ge));
    return std::min(1.0, 2.0 * tail / static_cast<double>(patterns));
}

double wilcoxon_normal_p(const std::vector<long long>& ranks2, long long w2_plus) {
    const auto n = static_cast<double>(ranks2.size());
    const double mean = n * (n + 1.0) / 4.0;
    double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    // Tie correction: each group of t equal ranks removes (t^3 - t)/48.
    std::vector<long long> sorted(ranks2);
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const auto t = static_cast<double>(j - i + 1);
        variance -= (t * t * t - t) / 48.0;
        i = j + 1;
    }
    const double sigma = std::sqrt(variance);
    const double w_plus = static_cast<double>(w2_plus) / 2.0;
    // Continuity-corrected two-sided p from the smaller tail.
    const double lower = normal_cdf((w_plus - mean + 0.5) / sigma);
    const double upper = 1.0 - normal_cdf((w_plus - mean - 0.5) / sigma);
    return std::min(1.0, 2.0 * std::min(lower, upper));
}

} // namespace detail

WilcoxonResult wilcoxon_signed_rank(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                    double alpha) {
    if (a.size() != b.size()) {
        throw LengthMismatch("paired vectors differ in length: " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");

    std::vector<double> abs_diffs;
    std::vector<bool> positive;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) throw ValidationError("non-finite paired difference");
        if (d == 0.0) continue;  // dropped, Wilcoxon's original treatment
        abs_diffs.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    const std::size_t n = abs_diffs.size();
    if (n < 5) {
        throw TooFewPairs("need at least 5 non-zero differences, got " + std::to_string(n));
    }

    const std::vector<long long> ranks2 = doubled_ranks(abs_diffs);
    long long w2_plus = 0;
    long long w2_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        w2_total += ranks2[i];
        if (positive[i]) w2_plus += ranks2[i];
    }
    const long long w2_minus = w2_total - w2_plus;

    constexpr std::size_t kExactLimit = 20;
    const double p = n <= kExactLimit ? detail::wilcoxon_exact_p(ranks2, w2_plus)
                                      : detail::wilcoxon_normal_p(ranks2, w2_plus);

    WilcoxonResult result;
    result.statistic = static_cast<double>(std::min(w2_plus, w2_minus)) / 2.0;
    result.p_value = p;
    result.significant = p < alpha;
    return result;
}

} // namespace ldao
