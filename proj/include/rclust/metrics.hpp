#ifndef RCLUST_METRICS_HPP
#define RCLUST_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace rclust {

// Cross-tabulation of two labelings of the same n items. Input labels may be
// arbitrary integers; they are densified internally.
struct ContingencyTable {
    std::vector<std::vector<std::int64_t>> counts;  // k1 x k2
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t total = 0;
};

// Throws std::invalid_argument on length mismatch or n < 2.
ContingencyTable contingency(std::span<const int> labels_a, std::span<const int> labels_b);

// Pair-counting agreement corrected for chance. Degenerate case (expected
// index equals the maximum index): 1 if the two partitions are identical,
// 0 otherwise.
double adjusted_rand_index(const ContingencyTable& table);

// Fraction of concordant item pairs.
double rand_index(const ContingencyTable& table);

double adjusted_rand_index(std::span<const int> labels_a, std::span<const int> labels_b);
double rand_index(std::span<const int> labels_a, std::span<const int> labels_b);

}  // namespace rclust

#endif
