#ifndef RCLUST_CLUSTER_HPP
#define RCLUST_CLUSTER_HPP

#include <cstddef>
#include <vector>

#include "rclust/matrix.hpp"
#include "rclust/randkit.hpp"

namespace rclust {

struct KMeansModel {
    Matrix centroids;              // k x dims
    std::vector<int> assignments;  // nearest centroid per point, low-index ties
    double inertia = 0.0;          // sum of squared distances to assigned centroids
    std::size_t iterations_run = 0;
    bool converged = false;
    // Objective recorded after each assignment step; non-increasing.
    std::vector<double> inertia_history;
};

// Lloyd K-means with Euclidean distance. Initial centroids are k distinct
// data points drawn without replacement from `stream` (restarts are handled
// by the caller). Stops when the largest centroid displacement falls below
// tol * data diameter, or after max_iter sweeps. Empty clusters are repaired
// by promoting the point currently farthest from its centroid.
KMeansModel kmeans_fit(const Matrix& points, std::size_t k, RandomStream stream,
                       std::size_t max_iter = 300, double tol = 1e-4);

// Nearest-centroid index per point, ties to the lowest index.
std::vector<int> assign(const KMeansModel& model, const Matrix& points);

}  // namespace rclust

#endif
