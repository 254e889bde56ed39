#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rclust/cluster.hpp"
#include "rclust/metrics.hpp"

using namespace rclust;

namespace {

Matrix gaussian_blobs(std::size_t per_cluster, std::size_t k, double separation,
                      std::uint64_t seed, std::vector<int>* truth = nullptr) {
    RandomStream gen(seed, "blobs");
    Matrix pts(per_cluster * k, 2);
    std::size_t row = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const double cx = separation * static_cast<double>(c);
        const double cy = 0.0;
        for (std::size_t i = 0; i < per_cluster; ++i, ++row) {
            pts(row, 0) = cx + gen.gaussian();
            pts(row, 1) = cy + gen.gaussian();
            if (truth) truth->push_back(static_cast<int>(c));
        }
    }
    return pts;
}

}  // namespace

TEST_CASE("k equal to n puts every point on its own centroid") {
    Matrix pts(5, 2);
    for (std::size_t i = 0; i < 5; ++i) {
        pts(i, 0) = static_cast<double>(i) * 3.0;
        pts(i, 1) = -static_cast<double>(i);
    }
    const auto model = kmeans_fit(pts, 5, RandomStream(0, "kmeans-init"));
    CHECK(model.inertia == doctest::Approx(0.0));
    std::set<int> used(model.assignments.begin(), model.assignments.end());
    CHECK(used.size() == 5);
}

TEST_CASE("k = 1 yields the mean and the total squared deviation") {
    Matrix pts(4, 1);
    pts(0, 0) = 1.0;
    pts(1, 0) = 3.0;
    pts(2, 0) = 5.0;
    pts(3, 0) = 7.0;
    const auto model = kmeans_fit(pts, 1, RandomStream(1, "kmeans-init"));
    CHECK(model.centroids(0, 0) == doctest::Approx(4.0));
    CHECK(model.inertia == doctest::Approx(20.0));  // 9+1+1+9
}

TEST_CASE("well-separated blobs are recovered in at least 9 of 10 seeds") {
    int perfect = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::vector<int> truth;
        const Matrix data = gaussian_blobs(20, 3, 10.0, 77, &truth);
        const auto model = kmeans_fit(data, 3, RandomStream(seed, "kmeans-init"));
        if (adjusted_rand_index(std::span<const int>(truth),
                                std::span<const int>(model.assignments)) == 1.0) {
            ++perfect;
        }
    }
    CHECK(perfect >= 9);
}

TEST_CASE("inertia history is non-increasing on random instances") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomStream gen(seed, "random-points");
        Matrix pts(40, 3);
        for (double& v : pts.data()) v = gen.gaussian();
        const auto model = kmeans_fit(pts, 4, RandomStream(seed, "kmeans-init"));
        for (std::size_t i = 1; i < model.inertia_history.size(); ++i) {
            CHECK(model.inertia_history[i] <= model.inertia_history[i - 1] + 1e-9);
        }
        CHECK(model.inertia <= model.inertia_history.back() + 1e-9);
    }
}

TEST_CASE("row order does not change the partition when fits agree") {
    std::vector<int> truth;
    const Matrix pts = gaussian_blobs(15, 3, 10.0, 7, &truth);
    Matrix rev(pts.rows(), pts.cols());
    for (std::size_t i = 0; i < pts.rows(); ++i) {
        for (std::size_t j = 0; j < pts.cols(); ++j) {
            rev(i, j) = pts(pts.rows() - 1 - i, j);
        }
    }
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = kmeans_fit(pts, 3, RandomStream(seed, "kmeans-init"));
        const auto b = kmeans_fit(rev, 3, RandomStream(seed, "kmeans-init"));
        // Different row order means a different init draw, so compare only
        // fits that reached the same optimum.
        if (std::abs(a.inertia - b.inertia) < 1e-6 * (1.0 + a.inertia)) {
            std::vector<int> unreversed(b.assignments.rbegin(), b.assignments.rend());
            CHECK(adjusted_rand_index(std::span<const int>(a.assignments),
                                      std::span<const int>(unreversed)) ==
                  doctest::Approx(1.0));
            ++compared;
        }
    }
    CHECK(compared >= 5);
}

TEST_CASE("no empty clusters when k is at most the distinct point count") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RandomStream gen(seed, "clumped");
        Matrix pts(30, 2);
        for (std::size_t i = 0; i < 30; ++i) {
            // Tight clumps tempt Lloyd into emptying clusters.
            const double base = static_cast<double>(i % 3) * 100.0;
            pts(i, 0) = base + 0.01 * gen.gaussian();
            pts(i, 1) = 0.01 * gen.gaussian();
        }
        const auto model = kmeans_fit(pts, 10, RandomStream(seed, "kmeans-init"));
        std::set<int> used(model.assignments.begin(), model.assignments.end());
        CHECK(used.size() == 10);
    }
}

TEST_CASE("assignments point at the nearest centroid with low-index ties") {
    Matrix pts(6, 2);
    for (std::size_t i = 0; i < 6; ++i) {
        pts(i, 0) = static_cast<double>(i);
        pts(i, 1) = 0.0;
    }
    const auto model = kmeans_fit(pts, 3, RandomStream(0, "kmeans-init"));

    // A centroid maps to its own index.
    const auto self = assign(model, model.centroids);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(self[c] == static_cast<int>(c));
    }

    // Equidistant point between centroids picks the lower index.
    KMeansModel two;
    two.centroids = Matrix(3, 1);
    two.centroids(0, 0) = -1.0;
    two.centroids(1, 0) = 5.0;
    two.centroids(2, 0) = 1.0;
    Matrix origin(1, 1, 0.0);
    CHECK(assign(two, origin)[0] == 0);

    // Brute-force distance scan agreement on random points.
    RandomStream gen(9, "assign");
    Matrix probes(50, 2);
    for (double& v : probes.data()) v = 5.0 * gen.gaussian();
    const auto got = assign(model, probes);
    for (std::size_t i = 0; i < probes.rows(); ++i) {
        int best = 0;
        double best_d = 1e300;
        for (std::size_t c = 0; c < model.centroids.rows(); ++c) {
            double d = 0.0;
            for (std::size_t j = 0; j < 2; ++j) {
                const double delta = probes(i, j) - model.centroids(c, j);
                d += delta * delta;
            }
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        CHECK(got[i] == best);
    }
}

TEST_CASE("invalid arguments are rejected") {
    Matrix pts(3, 2, 0.0);
    CHECK_THROWS_AS(kmeans_fit(pts, 0, RandomStream(0, "kmeans-init")), std::domain_error);
    CHECK_THROWS_AS(kmeans_fit(pts, 4, RandomStream(0, "kmeans-init")), std::invalid_argument);
    KMeansModel model;
    model.centroids = Matrix(2, 3, 0.0);
    CHECK_THROWS_AS(assign(model, pts), std::invalid_argument);
}
