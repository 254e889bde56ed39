#include "rclust/pipeline.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "rclust/metrics.hpp"

namespace rclust {
namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

}  // namespace

std::string PipelineConfig::describe() const {
    std::ostringstream os;
    os << bank.num_features << '-' << bank.kernel_length;
    if (!pca_enabled) {
        os << "-nopca";
    } else if (pca_threshold != 0.01) {
        os << "-t" << pca_threshold;
    }
    if (bank.bias_mode == BiasMode::LegacySorted) os << "-legacy";
    if (bank.weight_mode == WeightMode::Iid) os << "-iid";
    if (fixed_bank) os << "-fixedbank";
    return os.str();
}

SingleRun run_once(const TimeSeriesDataset& dataset, const PipelineConfig& config,
                   std::uint64_t seed, const FeatureBank* fixed_bank) {
    if (config.k > dataset.size()) {
        throw std::invalid_argument("run_once: k exceeds number of series");
    }
    SingleRun out;

    FeatureBank local_bank;
    const FeatureBank* bank = fixed_bank;
    if (!bank) {
        const auto t_bank = clock_type::now();
        BankConfig bc = config.bank;
        bc.seed = seed;
        local_bank = fit_bank(bc, dataset);
        bank = &local_bank;
        out.timings.bank_ms = ms_since(t_bank);
    }

    auto t0 = clock_type::now();
    const FeatureMatrix features = transform_dataset(dataset, *bank, config.threads);
    out.timings.transform_ms = ms_since(t0);

    Matrix embedded;
    if (config.pca_enabled) {
        t0 = clock_type::now();
        const PcaModel pca = fit_pca(features.values, config.pca_threshold);
        embedded = project(features.values, pca);
        out.retained_dims = pca.retained;
        out.timings.pca_ms = ms_since(t0);
    } else {
        embedded = features.values;
        out.retained_dims = features.values.cols();
    }

    t0 = clock_type::now();
    RandomStream init_stream = RandomStream(seed, "kmeans-init");
    const KMeansModel model = kmeans_fit(embedded, config.k, init_stream,
                                         config.kmeans_max_iter, config.kmeans_tol);
    out.timings.kmeans_ms = ms_since(t0);

    out.assignments = model.assignments;
    if (dataset.labels) {
        out.ari = adjusted_rand_index(
            std::span<const int>(*dataset.labels),
            std::span<const int>(out.assignments));
    }
    return out;
}

RunOutcome run_protocol(const TimeSeriesDataset& dataset, const PipelineConfig& config,
                        std::uint64_t base_seed, const FeatureBank* preloaded_bank) {
    if (config.runs < 1) {
        throw std::invalid_argument("run_protocol: runs must be >= 1");
    }
    FeatureBank shared_bank;
    const FeatureBank* bank = preloaded_bank;
    if (!bank && config.fixed_bank) {
        BankConfig bc = config.bank;
        bc.seed = base_seed;
        shared_bank = fit_bank(bc, dataset);
        bank = &shared_bank;
    }

    RunOutcome outcome;
    std::size_t best_run = 0;

    // With a pinned bank the embedding is identical across restarts, so
    // compute it once and redo only the K-means stage. The one-off stage
    // costs are booked against the first run.
    Matrix shared_embedding;
    StageTimings shared_timings;
    std::size_t shared_dims = 0;
    if (bank) {
        auto t0 = clock_type::now();
        const FeatureMatrix features = transform_dataset(dataset, *bank, config.threads);
        shared_timings.transform_ms = ms_since(t0);
        if (config.pca_enabled) {
            t0 = clock_type::now();
            const PcaModel pca = fit_pca(features.values, config.pca_threshold);
            shared_embedding = project(features.values, pca);
            shared_dims = pca.retained;
            shared_timings.pca_ms = ms_since(t0);
        } else {
            shared_embedding = features.values;
            shared_dims = features.values.cols();
        }
    }

    for (std::size_t r = 0; r < config.runs; ++r) {
        SingleRun run;
        if (bank) {
            const auto t0 = clock_type::now();
            RandomStream init_stream(base_seed + r, "kmeans-init");
            const KMeansModel model = kmeans_fit(shared_embedding, config.k, init_stream,
                                                 config.kmeans_max_iter, config.kmeans_tol);
            run.timings.kmeans_ms = ms_since(t0);
            if (r == 0) {
                run.timings.transform_ms = shared_timings.transform_ms;
                run.timings.pca_ms = shared_timings.pca_ms;
            }
            run.assignments = model.assignments;
            run.retained_dims = shared_dims;
            if (dataset.labels) {
                run.ari = adjusted_rand_index(std::span<const int>(*dataset.labels),
                                              std::span<const int>(run.assignments));
            }
        } else {
            run = run_once(dataset, config, base_seed + r, bank);
        }
        outcome.total_timings.bank_ms += run.timings.bank_ms;
        outcome.total_timings.transform_ms += run.timings.transform_ms;
        outcome.total_timings.pca_ms += run.timings.pca_ms;
        outcome.total_timings.kmeans_ms += run.timings.kmeans_ms;
        if (run.ari && (!outcome.best_ari || *run.ari > *outcome.best_ari)) {
            outcome.best_ari = *run.ari;
            best_run = r;
        }
        outcome.runs.push_back(std::move(run));
    }
    outcome.retained_dims = outcome.runs[best_run].retained_dims;
    return outcome;
}

}  // namespace rclust
