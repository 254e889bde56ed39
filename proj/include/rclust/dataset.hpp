#ifndef RCLUST_DATASET_HPP
#define RCLUST_DATASET_HPP

#include <optional>
#include <string>
#include <vector>

#include "rclust/matrix.hpp"

namespace rclust {

// Equal-length univariate time series, one per row. Labels are optional
// (clustering is unsupervised; labels only feed the ARI scoring) and are
// densified to 0..C-1 at load time.
struct TimeSeriesDataset {
    std::string name;
    Matrix values;  // n_series x length
    std::optional<std::vector<int>> labels;

    std::size_t size() const { return values.rows(); }
    std::size_t length() const { return values.cols(); }
};

}  // namespace rclust

#endif
