#ifndef RCLUST_PARALLEL_HPP
#define RCLUST_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace rclust {

// Static-chunked parallel loop over [begin, end). Workers write to disjoint
// outputs only, so the result is identical for every thread count.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, int threads, Fn&& fn) {
    const std::size_t n = end > begin ? end - begin : 0;
    if (n == 0) return;
    const std::size_t nworkers =
        std::min<std::size_t>(std::max(threads, 1), n);
    if (nworkers <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    const std::size_t chunk = (n + nworkers - 1) / nworkers;
    for (std::size_t w = 0; w < nworkers; ++w) {
        const std::size_t lo = begin + w * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace rclust

#endif
