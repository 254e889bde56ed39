#include "rclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rclust {
namespace {

std::vector<int> densify(std::span<const int> labels) {
    std::vector<int> uniq(labels.begin(), labels.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out[i] = static_cast<int>(
            std::lower_bound(uniq.begin(), uniq.end(), labels[i]) - uniq.begin());
    }
    return out;
}

// C(m, 2) in floating point; cluster sizes up to 1e6 and beyond stay exact
// enough in long double (products below 2^63 are exact anyway).
long double comb2(std::int64_t m) {
    return 0.5L * static_cast<long double>(m) * static_cast<long double>(m - 1);
}

// Identical partitions show up as a permutation-matrix-like table.
bool partitions_identical(const ContingencyTable& t) {
    if (t.counts.size() != t.counts[0].size()) return false;
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
        std::size_t nonzero = 0;
        for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
            if (t.counts[i][j] != 0) {
                ++nonzero;
                if (t.counts[i][j] != t.row_sums[i] || t.counts[i][j] != t.col_sums[j]) {
                    return false;
                }
            }
        }
        if (nonzero != 1) return false;
    }
    return true;
}

}  // namespace

ContingencyTable contingency(std::span<const int> labels_a, std::span<const int> labels_b) {
    if (labels_a.size() != labels_b.size()) {
        throw std::invalid_argument("contingency: label vectors differ in length");
    }
    if (labels_a.size() < 2) {
        throw std::invalid_argument("contingency: need at least 2 items");
    }
    const auto a = densify(labels_a);
    const auto b = densify(labels_b);
    const int ka = *std::max_element(a.begin(), a.end()) + 1;
    const int kb = *std::max_element(b.begin(), b.end()) + 1;

    ContingencyTable t;
    t.counts.assign(ka, std::vector<std::int64_t>(kb, 0));
    t.row_sums.assign(ka, 0);
    t.col_sums.assign(kb, 0);
    t.total = static_cast<std::int64_t>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        t.counts[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])]++;
        t.row_sums[static_cast<std::size_t>(a[i])]++;
        t.col_sums[static_cast<std::size_t>(b[i])]++;
    }
    return t;
}

double adjusted_rand_index(const ContingencyTable& t) {
    if (t.total < 2) {
        throw std::invalid_argument("adjusted_rand_index: need at least 2 items");
    }
    long double sum_ij = 0.0L;
    for (const auto& row : t.counts) {
        for (std::int64_t c : row) sum_ij += comb2(c);
    }
    long double sum_a = 0.0L, sum_b = 0.0L;
    for (std::int64_t c : t.row_sums) sum_a += comb2(c);
    for (std::int64_t c : t.col_sums) sum_b += comb2(c);

    const long double expected = sum_a * sum_b / comb2(t.total);
    const long double max_index = 0.5L * (sum_a + sum_b);
    const long double denom = max_index - expected;
    if (std::abs(static_cast<double>(denom)) < 1e-12) {
        return partitions_identical(t) ? 1.0 : 0.0;
    }
    return static_cast<double>((sum_ij - expected) / denom);
}

double rand_index(const ContingencyTable& t) {
    if (t.total < 2) {
        throw std::invalid_argument("rand_index: need at least 2 items");
    }
    long double sum_ij = 0.0L;
    for (const auto& row : t.counts) {
        for (std::int64_t c : row) sum_ij += comb2(c);
    }
    long double sum_a = 0.0L, sum_b = 0.0L;
    for (std::int64_t c : t.row_sums) sum_a += comb2(c);
    for (std::int64_t c : t.col_sums) sum_b += comb2(c);
    const long double pairs = comb2(t.total);
    // Concordant = pairs together in both + pairs apart in both.
    const long double concordant = pairs + 2.0L * sum_ij - sum_a - sum_b;
    return static_cast<double>(concordant / pairs);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    return adjusted_rand_index(contingency(a, b));
}

double rand_index(std::span<const int> a, std::span<const int> b) {
    return rand_index(contingency(a, b));
}

}  // namespace rclust
