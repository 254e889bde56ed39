#include "rclust/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rclust {
namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return acc;
}

int nearest(const Matrix& centroids, std::span<const double> point) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = sq_dist(centroids.row(c), point);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

// Bounding-box diagonal; scale reference for the convergence tolerance.
double data_diameter(const Matrix& points) {
    const std::size_t dims = points.cols();
    double acc = 0.0;
    for (std::size_t j = 0; j < dims; ++j) {
        double lo = points(0, j), hi = points(0, j);
        for (std::size_t i = 1; i < points.rows(); ++i) {
            lo = std::min(lo, points(i, j));
            hi = std::max(hi, points(i, j));
        }
        acc += (hi - lo) * (hi - lo);
    }
    return std::sqrt(acc);
}

// Promote the point farthest from its centroid into each empty cluster.
// Strictly decreases the objective (the moved point's cost drops to zero).
void repair_empty(const Matrix& points, Matrix& centroids, std::vector<int>& assignments,
                  std::vector<std::size_t>& counts) {
    const std::size_t k = centroids.rows();
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        std::size_t worst = 0;
        double worst_d = -1.0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            const auto owner = static_cast<std::size_t>(assignments[i]);
            if (counts[owner] <= 1) continue;  // do not empty another cluster
            const double d = sq_dist(points.row(i), centroids.row(owner));
            if (d > worst_d) {
                worst_d = d;
                worst = i;
            }
        }
        if (worst_d < 0.0) continue;  // nothing movable (duplicate-heavy data)
        counts[static_cast<std::size_t>(assignments[worst])]--;
        assignments[worst] = static_cast<int>(c);
        counts[c] = 1;
        auto dst = centroids.row(c);
        auto src = points.row(worst);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = src[j];
    }
}

}  // namespace

KMeansModel kmeans_fit(const Matrix& points, std::size_t k, RandomStream stream,
                       std::size_t max_iter, double tol) {
    const std::size_t n = points.rows();
    const std::size_t dims = points.cols();
    if (k == 0) {
        throw std::domain_error("kmeans_fit: k must be >= 1");
    }
    if (k > n) {
        throw std::invalid_argument("kmeans_fit: k exceeds number of points");
    }

    // Forgy init: k distinct indices without replacement.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    KMeansModel model;
    model.centroids = Matrix(k, dims);
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t j = c + static_cast<std::size_t>(stream.choice(n - c));
        std::swap(idx[c], idx[j]);
        auto dst = model.centroids.row(c);
        auto src = points.row(idx[c]);
        for (std::size_t d = 0; d < dims; ++d) dst[d] = src[d];
    }

    const double move_tol = tol * data_diameter(points);
    model.assignments.assign(n, 0);
    std::vector<std::size_t> counts(k, 0);
    Matrix sums(k, dims);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        model.iterations_run = iter + 1;

        // Assignment.
        counts.assign(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            model.assignments[i] = nearest(model.centroids, points.row(i));
            counts[static_cast<std::size_t>(model.assignments[i])]++;
        }
        repair_empty(points, model.centroids, model.assignments, counts);

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            inertia += sq_dist(points.row(i),
                               model.centroids.row(static_cast<std::size_t>(model.assignments[i])));
        }
        model.inertia_history.push_back(inertia);
        model.inertia = inertia;

        // Update: cluster means, accumulated in fixed point order.
        sums = Matrix(k, dims);
        for (std::size_t i = 0; i < n; ++i) {
            auto dst = sums.row(static_cast<std::size_t>(model.assignments[i]));
            auto src = points.row(i);
            for (std::size_t d = 0; d < dims; ++d) dst[d] += src[d];
        }
        double max_move = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            double move = 0.0;
            auto row = model.centroids.row(c);
            for (std::size_t d = 0; d < dims; ++d) {
                const double next = sums(c, d) / static_cast<double>(counts[c]);
                const double delta = next - row[d];
                move += delta * delta;
                row[d] = next;
            }
            max_move = std::max(max_move, std::sqrt(move));
        }
        if (max_move <= move_tol) {
            model.converged = true;
            break;
        }
    }

    // Final passes until assignments are nearest-centroid consistent and no
    // cluster is empty (a repair can shift what "nearest" means).
    for (std::size_t round = 0; round <= k; ++round) {
        counts.assign(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            model.assignments[i] = nearest(model.centroids, points.row(i));
            counts[static_cast<std::size_t>(model.assignments[i])]++;
        }
        if (std::find(counts.begin(), counts.end(), std::size_t{0}) == counts.end()) break;
        repair_empty(points, model.centroids, model.assignments, counts);
    }
    model.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        model.inertia += sq_dist(points.row(i),
                                 model.centroids.row(static_cast<std::size_t>(model.assignments[i])));
    }
    return model;
}

std::vector<int> assign(const KMeansModel& model, const Matrix& points) {
    if (points.cols() != model.centroids.cols()) {
        throw std::invalid_argument("assign: point dimension does not match centroids");
    }
    std::vector<int> out(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        out[i] = nearest(model.centroids, points.row(i));
    }
    return out;
}

}  // namespace rclust
