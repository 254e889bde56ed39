#ifndef RCLUST_PIPELINE_HPP
#define RCLUST_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rclust/cluster.hpp"
#include "rclust/dataset.hpp"
#include "rclust/kernelbank.hpp"
#include "rclust/reduce.hpp"
#include "rclust/transform.hpp"

namespace rclust {

struct PipelineConfig {
    BankConfig bank;             // bank.seed is overridden by the run seed
    bool pca_enabled = true;     // off = the "without PCA" variant
    double pca_threshold = 0.01;
    std::size_t k = 2;
    std::size_t runs = 10;
    std::size_t kmeans_max_iter = 300;
    double kmeans_tol = 1e-4;
    // When set, restarts reuse one bank and vary only the K-means init.
    bool fixed_bank = false;
    int threads = 1;

    std::string describe() const;  // short tag for result records
};

struct StageTimings {
    double bank_ms = 0.0;
    double transform_ms = 0.0;
    double pca_ms = 0.0;
    double kmeans_ms = 0.0;
    double total_ms() const { return bank_ms + transform_ms + pca_ms + kmeans_ms; }
};

struct SingleRun {
    std::vector<int> assignments;
    std::optional<double> ari;  // present when the dataset carries labels
    std::size_t retained_dims = 0;
    StageTimings timings;
};

struct RunOutcome {
    std::vector<SingleRun> runs;
    std::optional<double> best_ari;
    std::size_t retained_dims = 0;  // from the best run (or the last one)
    StageTimings total_timings;
};

// One full pass: fit bank, transform, PCA (optional), K-means. Every
// stochastic choice derives from `seed`; identical inputs replay exactly.
// Pass a pre-fitted bank to skip the bank stage (e.g. --load-bank).
SingleRun run_once(const TimeSeriesDataset& dataset, const PipelineConfig& config,
                   std::uint64_t seed, const FeatureBank* fixed_bank = nullptr);

// The ten-restart protocol: run_once under seeds base_seed .. base_seed+runs-1,
// reporting every ARI and the maximum.
RunOutcome run_protocol(const TimeSeriesDataset& dataset, const PipelineConfig& config,
                        std::uint64_t base_seed, const FeatureBank* preloaded_bank = nullptr);

}  // namespace rclust

#endif
