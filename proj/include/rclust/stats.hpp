#ifndef RCLUST_STATS_HPP
#define RCLUST_STATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rclust/matrix.hpp"

namespace rclust {

// ARI scores for N datasets x k algorithms.
struct ScoreTable {
    std::vector<std::string> dataset_names;
    std::vector<std::string> algorithm_names;
    Matrix scores;  // N x k
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double alpha_used = 0.05;
    bool rejected = false;
    std::string method;
};

struct PairwiseRow {
    std::string algorithm_1;
    std::string algorithm_2;
    double p_value = 1.0;
    double holm_alpha = 0.0;
    bool significant = false;
};

// Rows sorted ascending by p-value; Holm alphas non-decreasing down the
// list, and once a row fails every later row is non-significant.
struct PairwiseReport {
    std::vector<PairwiseRow> rows;
    std::string to_csv() const;
    std::string to_markdown() const;
};

struct AlgorithmSummary {
    std::string name;
    double mean_rank = 0.0;
    double mean_score = 0.0;
    std::size_t wins = 0;  // strict unique maxima only
};

// Upper-tail probabilities, implemented via the regularized incomplete
// gamma function / erfc. Exposed for tests.
double chi_squared_sf(double x, double df);
double normal_sf(double z);

// Per-dataset ranks, 1 = best (highest score), ties averaged.
Matrix rank_rows(const Matrix& scores);

// Friedman rank test across k algorithms on N datasets; chi-square
// approximation with k-1 degrees of freedom.
TestResult friedman_test(const Matrix& scores, double alpha = 0.05);

// Paired two-sided Wilcoxon signed-rank test. Zero differences are dropped;
// |d| ranks use average ties. Exact null distribution (rank-sum counting)
// up to 25 nonzero differences, normal approximation with tie and
// continuity correction above. `method` can pin one path, e.g. to compare
// the two at the switchover point.
enum class WilcoxonMethod { Auto, Exact, Normal };
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                double alpha = 0.05,
                                WilcoxonMethod method = WilcoxonMethod::Auto);

// Step-down Holm thresholds alpha/(m - i + 1) for the i-th smallest p.
std::vector<double> holm_thresholds(std::size_t m, double alpha = 0.05);

// Applies the Holm step-down procedure to labeled pairwise p-values.
PairwiseReport holm_adjust(std::vector<PairwiseRow> rows, double alpha = 0.05);

// Ljung-Box portmanteau test at each lag 1..max_lag.
// Throws std::domain_error on zero-variance input.
std::vector<TestResult> ljung_box(std::span<const double> series, std::size_t max_lag,
                                  double alpha = 0.05);

// Mean rank / mean score / strict-win count per algorithm.
std::vector<AlgorithmSummary> aggregate(const ScoreTable& table);

}  // namespace rclust

#endif
