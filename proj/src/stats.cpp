#include "rclust/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rclust {
namespace {

// Regularized lower incomplete gamma P(a, x), series expansion (x < a + 1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x), continued fraction (x >= a + 1).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) {
        throw std::invalid_argument("gamma_q: invalid arguments");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

// Average-tie ranks of |values|, ascending.
std::vector<double> ranks_ascending(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double chi_squared_sf(double x, double df) {
    if (df <= 0.0) {
        throw std::invalid_argument("chi_squared_sf: df must be positive");
    }
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

Matrix rank_rows(const Matrix& scores) {
    Matrix out(scores.rows(), scores.cols());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        // Rank 1 = highest score: rank the negated row ascending.
        std::vector<double> neg(scores.cols());
        for (std::size_t j = 0; j < scores.cols(); ++j) neg[j] = -scores(i, j);
        auto r = ranks_ascending(neg);
        for (std::size_t j = 0; j < scores.cols(); ++j) out(i, j) = r[j];
    }
    return out;
}

TestResult friedman_test(const Matrix& scores, double alpha) {
    const std::size_t n = scores.rows();
    const std::size_t k = scores.cols();
    if (n < 2 || k < 2) {
        throw std::invalid_argument("friedman_test: need at least 2 datasets and 2 algorithms");
    }
    const Matrix ranks = rank_rows(scores);
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double rj = 0.0;
        for (std::size_t i = 0; i < n; ++i) rj += ranks(i, j);
        sum_sq += rj * rj;
    }
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    double stat = 12.0 / (nn * kk * (kk + 1.0)) * sum_sq - 3.0 * nn * (kk + 1.0);
    if (stat < 0.0) stat = 0.0;  // all-tied tables land at exactly 0 up to rounding

    TestResult res;
    res.statistic = stat;
    res.p_value = chi_squared_sf(stat, kk - 1.0);
    res.alpha_used = alpha;
    res.rejected = res.p_value < alpha;
    res.method = "friedman";
    return res;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                double alpha, WilcoxonMethod method) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("wilcoxon_signed_rank: samples differ in length");
    }
    std::vector<double> abs_d;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d == 0.0) continue;  // classic zero handling: drop
        abs_d.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    const std::size_t m = abs_d.size();

    TestResult res;
    res.alpha_used = alpha;
    if (m == 0) {
        res.method = "wilcoxon-degenerate";
        res.p_value = 1.0;
        return res;
    }

    const auto ranks = ranks_ascending(abs_d);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (positive[i]) w_plus += ranks[i];
    }
    const double total = 0.5 * static_cast<double>(m) * static_cast<double>(m + 1);
    const double w_minus = total - w_plus;
    const double w = std::min(w_plus, w_minus);
    res.statistic = w;

    const bool exact = method == WilcoxonMethod::Exact ||
                       (method == WilcoxonMethod::Auto && m <= 25);
    if (exact) {
        // Exact two-sided p: count sign assignments with rank sum in either
        // tail. Doubling the ranks makes tied (half-integer) ranks integral.
        std::vector<int> r2(m);
        for (std::size_t i = 0; i < m; ++i) {
            r2[i] = static_cast<int>(std::llround(2.0 * ranks[i]));
        }
        const int max_sum = std::accumulate(r2.begin(), r2.end(), 0);
        std::vector<double> count(static_cast<std::size_t>(max_sum) + 1, 0.0);
        count[0] = 1.0;
        for (int r : r2) {
            for (int s = max_sum; s >= r; --s) {
                count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - r)];
            }
        }
        const int w2 = static_cast<int>(std::llround(2.0 * w));
        double tail_lo = 0.0, tail_hi = 0.0;
        for (int s = 0; s <= max_sum; ++s) {
            if (s <= w2) tail_lo += count[static_cast<std::size_t>(s)];
            if (s >= max_sum - w2) tail_hi += count[static_cast<std::size_t>(s)];
        }
        res.p_value = std::min(1.0, (tail_lo + tail_hi) / std::exp2(static_cast<double>(m)));
        res.method = "wilcoxon-exact";
    } else {
        const double mm = static_cast<double>(m);
        const double mean = mm * (mm + 1.0) / 4.0;
        double tie_term = 0.0;
        std::size_t i = 0;
        std::vector<double> sorted = abs_d;
        std::sort(sorted.begin(), sorted.end());
        while (i < m) {
            std::size_t j = i;
            while (j + 1 < m && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        const double var = mm * (mm + 1.0) * (2.0 * mm + 1.0) / 24.0 - tie_term / 48.0;
        const double z = (mean - w - 0.5) / std::sqrt(var);  // continuity correction
        res.p_value = std::min(1.0, 2.0 * normal_sf(z));
        res.method = "wilcoxon-normal";
    }
    res.rejected = res.p_value < alpha;
    return res;
}

std::vector<double> holm_thresholds(std::size_t m, double alpha) {
    if (m == 0) {
        throw std::invalid_argument("holm_thresholds: m must be >= 1");
    }
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = alpha / static_cast<double>(m - i);
    }
    return out;
}

PairwiseReport holm_adjust(std::vector<PairwiseRow> rows, double alpha) {
    if (rows.empty()) {
        throw std::invalid_argument("holm_adjust: no p-values");
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PairwiseRow& a, const PairwiseRow& b) {
                         return a.p_value < b.p_value;
                     });
    const auto thresholds = holm_thresholds(rows.size(), alpha);
    bool alive = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].holm_alpha = thresholds[i];
        if (alive && rows[i].p_value < thresholds[i]) {
            rows[i].significant = true;
        } else {
            alive = false;  // step-down: first failure kills the rest
            rows[i].significant = false;
        }
    }
    return PairwiseReport{std::move(rows)};
}

std::vector<TestResult> ljung_box(std::span<const double> series, std::size_t max_lag,
                                  double alpha) {
    const std::size_t n = series.size();
    if (max_lag == 0 || n <= max_lag + 1) {
        throw std::invalid_argument("ljung_box: series too short for requested lag");
    }
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : series) c0 += (v - mean) * (v - mean);
    if (c0 <= 0.0) {
        throw std::domain_error("ljung_box: series has zero variance");
    }

    std::vector<TestResult> out;
    out.reserve(max_lag);
    const double nn = static_cast<double>(n);
    double q = 0.0;
    for (std::size_t h = 1; h <= max_lag; ++h) {
        double ch = 0.0;
        for (std::size_t t = h; t < n; ++t) {
            ch += (series[t] - mean) * (series[t - h] - mean);
        }
        const double rho = ch / c0;
        q += nn * (nn + 2.0) * rho * rho / (nn - static_cast<double>(h));
        TestResult res;
        res.statistic = q;
        res.p_value = chi_squared_sf(q, static_cast<double>(h));
        res.alpha_used = alpha;
        res.rejected = res.p_value < alpha;
        res.method = "ljung-box";
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<AlgorithmSummary> aggregate(const ScoreTable& table) {
    const std::size_t n = table.scores.rows();
    const std::size_t k = table.scores.cols();
    if (n == 0 || k == 0) {
        throw std::invalid_argument("aggregate: empty score table");
    }
    const Matrix ranks = rank_rows(table.scores);
    std::vector<AlgorithmSummary> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        out[j].name = j < table.algorithm_names.size() ? table.algorithm_names[j]
                                                       : "alg" + std::to_string(j);
        double rank_sum = 0.0, score_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rank_sum += ranks(i, j);
            score_sum += table.scores(i, j);
        }
        out[j].mean_rank = rank_sum / static_cast<double>(n);
        out[j].mean_score = score_sum / static_cast<double>(n);
    }
    // Wins: strict unique maximum only; ties award nobody.
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        bool unique = true;
        for (std::size_t j = 1; j < k; ++j) {
            if (table.scores(i, j) > table.scores(i, best)) {
                best = j;
                unique = true;
            } else if (table.scores(i, j) == table.scores(i, best)) {
                unique = false;
            }
        }
        if (unique && k > 1) out[best].wins++;
        if (k == 1) out[0].wins++;
    }
    return out;
}

std::string PairwiseReport::to_csv() const {
    std::ostringstream os;
    os << "algorithm_1,algorithm_2,p_value,holm_alpha,significant\n";
    for (const auto& r : rows) {
        os << r.algorithm_1 << ',' << r.algorithm_2 << ',' << r.p_value << ','
           << r.holm_alpha << ',' << (r.significant ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string PairwiseReport::to_markdown() const {
    std::ostringstream os;
    os << "| Algorithm 1 | Algorithm 2 | p value | alpha (Holm) | Significant difference |\n";
    os << "|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        os << "| " << r.algorithm_1 << " | " << r.algorithm_2 << " | " << r.p_value
           << " | " << r.holm_alpha << " | " << (r.significant ? "yes" : "no") << " |\n";
    }
    return os.str();
}

}  // namespace rclust
