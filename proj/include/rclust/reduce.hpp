#ifndef RCLUST_REDUCE_HPP
#define RCLUST_REDUCE_HPP

#include <cstddef>
#include <vector>

#include "rclust/matrix.hpp"

namespace rclust {

// PCA model fitted to a feature matrix. `components` holds every computed
// component (orthonormal rows, descending variance); `retained` is how many
// of them survive the explained-variance threshold.
struct PcaModel {
    std::vector<double> means;                     // per-column means
    Matrix components;                             // n_components x n_features
    std::vector<double> explained_variance;        // descending
    std::vector<double> explained_variance_ratio;  // descending, sums to 1
    std::size_t retained = 0;
};

// Number of leading ratios >= threshold, clamped to at least 1.
std::size_t select_dims(const std::vector<double>& ratios, double threshold = 0.01);

// Centered thin-SVD PCA. Components are sign-fixed so each row's entry of
// largest magnitude is positive. Throws std::invalid_argument on fewer than
// 2 rows and std::domain_error when the data has zero total variance.
PcaModel fit_pca(const Matrix& features, double threshold = 0.01);

// (X - means) * components^T over the first `dims` components.
Matrix project(const Matrix& features, const PcaModel& model, std::size_t dims);

// Projection onto the retained components.
inline Matrix project(const Matrix& features, const PcaModel& model) {
    return project(features, model, model.retained);
}

// Inverse map from an embedding back to feature space (used in tests to
// check reconstruction with a full set of components).
Matrix reconstruct(const Matrix& embedding, const PcaModel& model);

}  // namespace rclust

#endif
