#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gg::stats {

// ---------------------------------------------------------------------------
// Effect sizes and tests
// ---------------------------------------------------------------------------

struct EffectReport {
    std::string metric;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double cohens_d = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;
    std::string significance;  // "ns", "*", "**", "***"
};

/// *** iff p < .001, ** iff p < .01, * iff p < .05, else ns.
std::string significance_tier(double p_value);

double mean(const std::vector<double>& values);
double sample_variance(const std::vector<double>& values);

/// (mean_a - mean_b) / pooled_sd with sample variances.
/// Throws std::domain_error when the pooled standard deviation is zero.
double cohens_d(const std::vector<double>& group_a, const std::vector<double>& group_b);

/// Welch's t-test, two-sided, with Welch-Satterthwaite degrees of freedom.
/// Throws std::domain_error when both groups have zero variance.
EffectReport welch_test(const std::vector<double>& group_a,
                        const std::vector<double>& group_b,
                        const std::string& metric = "");

/// Two-sided p-value for a t statistic, via the regularized incomplete beta.
double student_t_two_sided_p(double t, double df);

/// I_x(a, b) evaluated by continued fractions to 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

// ---------------------------------------------------------------------------
// Intraclass correlation
// ---------------------------------------------------------------------------

/// Complete n x k grid: n targets (rows), k sessions/raters (columns).
struct RatingsMatrix {
    Eigen::MatrixXd values;

    Eigen::Index targets() const { return values.rows(); }
    Eigen::Index sessions() const { return values.cols(); }
};

struct IccReport {
    std::string metric;
    double icc = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::string level;  // Poor / Moderate / Good / Excellent
};

/// Koo-Li bands: Excellent >= .90, Good [.75,.90), Moderate [.50,.75), Poor < .50.
std::string icc_level(double icc);

struct IccOptions {
    int bootstrap_replicates = 2000;
    std::uint64_t seed = 20250814;
    std::string metric;
};

/// ICC(2,1): two-way random effects, single rater, absolute agreement.
/// CI by seeded percentile bootstrap over targets (clamped to contain the
/// point estimate). Throws std::domain_error when all cells are equal.
IccReport icc_2_1(const RatingsMatrix& matrix, const IccOptions& options = {});

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct Observation {
    std::string condition;
    std::string metric;
    double value = 0.0;
};

struct SummaryRow {
    std::string condition;
    std::string metric;
    double mean = 0.0;
    double sd = 0.0;  // sample sd; 0 when n == 1
    int n = 0;
};

/// Groups observations by (condition, metric); rows ordered by condition then
/// by first appearance of the metric.
std::vector<SummaryRow> aggregate_by_condition(const std::vector<Observation>& observations);

}  // namespace gg::stats
