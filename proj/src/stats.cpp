#include "gamegrammar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace gg::stats {

namespace {

void require_group(const std::vector<double>& group, const char* name) {
    if (group.size() < 2) {
        throw std::invalid_argument(std::string(name) + " needs at least 2 values");
    }
}

}  // namespace

double mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_variance(const std::vector<double>& values) {
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

std::string significance_tier(double p_value) {
    if (p_value < 0.001) return "***";
    if (p_value < 0.01) return "**";
    if (p_value < 0.05) return "*";
    return "ns";
}

double cohens_d(const std::vector<double>& group_a, const std::vector<double>& group_b) {
    require_group(group_a, "group_a");
    require_group(group_b, "group_b");
    const double na = static_cast<double>(group_a.size());
    const double nb = static_cast<double>(group_b.size());
    const double va = sample_variance(group_a);
    const double vb = sample_variance(group_b);
    const double pooled = std::sqrt(((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0));
    if (pooled == 0.0) {
        throw std::domain_error("cohens_d: pooled standard deviation is zero");
    }
    return (mean(group_a) - mean(group_b)) / pooled;
}

// ---------------------------------------------------------------------------
// Regularized incomplete beta (Lentz continued fraction) and Student-t CDF
// ---------------------------------------------------------------------------

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 500;

double beta_continued_fraction(double a, double b, double x) {
    const double tiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double result = d;
    for (int m = 1; m <= kBetaMaxIterations; ++m) {
        const double dm = static_cast<double>(m);
        // even step
        double numerator = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
        d = 1.0 + numerator * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + numerator / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        result *= d * c;
        // odd step
        numerator = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
        d = 1.0 + numerator * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + numerator / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        result *= delta;
        if (std::fabs(delta - 1.0) < kBetaTolerance) return result;
    }
    return result;  // converged to working precision in practice
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // Use the symmetry relation where the continued fraction converges fast.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

EffectReport welch_test(const std::vector<double>& group_a,
                        const std::vector<double>& group_b, const std::string& metric) {
    require_group(group_a, "group_a");
    require_group(group_b, "group_b");
    const double na = static_cast<double>(group_a.size());
    const double nb = static_cast<double>(group_b.size());
    const double va = sample_variance(group_a);
    const double vb = sample_variance(group_b);
    if (va == 0.0 && vb == 0.0) {
        throw std::domain_error("welch_test: both groups have zero variance");
    }
    EffectReport report;
    report.metric = metric;
    report.mean_a = mean(group_a);
    report.mean_b = mean(group_b);
    const double se2 = va / na + vb / nb;
    report.t_statistic = (report.mean_a - report.mean_b) / std::sqrt(se2);
    const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) +
                                   (vb / nb) * (vb / nb) / (nb - 1.0));
    report.p_value = student_t_two_sided_p(report.t_statistic, df);
    report.cohens_d = cohens_d(group_a, group_b);
    report.significance = significance_tier(report.p_value);
    return report;
}

// ---------------------------------------------------------------------------
// ICC(2,1)
// ---------------------------------------------------------------------------

namespace {

struct AnovaDecomposition {
    double ms_targets = 0.0;
    double ms_sessions = 0.0;
    double ms_error = 0.0;
};

AnovaDecomposition two_way_anova(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    const auto k = m.cols();
    const double grand = m.mean();
    const Eigen::VectorXd row_means = m.rowwise().mean();
    const Eigen::VectorXd col_means = m.colwise().mean();

    const double ss_total = (m.array() - grand).square().sum();
    const double ss_targets = static_cast<double>(k) * (row_means.array() - grand).square().sum();
    const double ss_sessions = static_cast<double>(n) * (col_means.array() - grand).square().sum();
    const double ss_error = ss_total - ss_targets - ss_sessions;

    AnovaDecomposition out;
    out.ms_targets = ss_targets / static_cast<double>(n - 1);
    out.ms_sessions = ss_sessions / static_cast<double>(k - 1);
    out.ms_error = ss_error / static_cast<double>((n - 1) * (k - 1));
    return out;
}

std::optional<double> icc_point_estimate(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    const auto k = m.cols();
    const AnovaDecomposition ms = two_way_anova(m);
    const double denominator = ms.ms_targets + static_cast<double>(k - 1) * ms.ms_error +
                               (static_cast<double>(k) / static_cast<double>(n)) *
                                   (ms.ms_sessions - ms.ms_error);
    if (std::fabs(denominator) < 1e-300) return std::nullopt;
    return (ms.ms_targets - ms.ms_error) / denominator;
}

}  // namespace

std::string icc_level(double icc) {
    if (icc >= 0.90) return "Excellent";
    if (icc >= 0.75) return "Good";
    if (icc >= 0.50) return "Moderate";
    return "Poor";
}

IccReport icc_2_1(const RatingsMatrix& matrix, const IccOptions& options) {
    const Eigen::MatrixXd& m = matrix.values;
    const auto n = m.rows();
    const auto k = m.cols();
    if (n < 2 || k < 2) {
        throw std::invalid_argument("icc_2_1: matrix must be at least 2x2");
    }
    const double grand = m.mean();
    if ((m.array() - grand).abs().maxCoeff() == 0.0) {
        throw std::domain_error("icc_2_1: all cells are equal (no variance)");
    }

    const auto point = icc_point_estimate(m);
    if (!point) {
        throw std::domain_error("icc_2_1: degenerate variance decomposition");
    }

    IccReport report;
    report.metric = options.metric;
    report.icc = *point;
    report.level = icc_level(report.icc);

    // Percentile bootstrap over targets. Each replicate draws its own seeded
    // stream so the result is independent of evaluation order.
    std::vector<double> replicates;
    replicates.reserve(static_cast<std::size_t>(options.bootstrap_replicates));
    for (int r = 0; r < options.bootstrap_replicates; ++r) {
        std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * (r + 1)));
        std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
        Eigen::MatrixXd resampled(n, k);
        for (Eigen::Index i = 0; i < n; ++i) {
            resampled.row(i) = m.row(pick(rng));
        }
        const double rgrand = resampled.mean();
        if ((resampled.array() - rgrand).abs().maxCoeff() == 0.0) continue;
        if (auto estimate = icc_point_estimate(resampled)) {
            replicates.push_back(*estimate);
        }
    }

    if (replicates.size() >= 2) {
        std::sort(replicates.begin(), replicates.end());
        auto percentile = [&](double q) {
            const double pos = q * static_cast<double>(replicates.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = static_cast<std::size_t>(std::ceil(pos));
            const double frac = pos - std::floor(pos);
            return replicates[lo] * (1.0 - frac) + replicates[hi] * frac;
        };
        report.ci_low = percentile(0.025);
        report.ci_high = percentile(0.975);
    } else {
        report.ci_low = report.icc;
        report.ci_high = report.icc;
    }
    // Percentile intervals can exclude the point estimate on tiny samples;
    // the report contract requires ci_low <= icc <= ci_high.
    report.ci_low = std::min(report.ci_low, report.icc);
    report.ci_high = std::max(report.ci_high, report.icc);
    return report;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

std::vector<SummaryRow> aggregate_by_condition(const std::vector<Observation>& observations) {
    // condition -> metric -> values, with metric order preserved per first use
    std::map<std::string, std::vector<std::pair<std::string, std::vector<double>>>> grouped;
    for (const auto& obs : observations) {
        auto& metrics = grouped[obs.condition];
        auto it = std::find_if(metrics.begin(), metrics.end(),
                               [&](const auto& entry) { return entry.first == obs.metric; });
        if (it == metrics.end()) {
            metrics.push_back({obs.metric, {obs.value}});
        } else {
            it->second.push_back(obs.value);
        }
    }
    std::vector<SummaryRow> rows;
    for (const auto& [condition, metrics] : grouped) {
        for (const auto& [metric, values] : metrics) {
            SummaryRow row;
            row.condition = condition;
            row.metric = metric;
            row.n = static_cast<int>(values.size());
            row.mean = mean(values);
            row.sd = values.size() > 1 ? std::sqrt(sample_variance(values)) : 0.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace gg::stats
