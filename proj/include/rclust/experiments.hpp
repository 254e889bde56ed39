#ifndef RCLUST_EXPERIMENTS_HPP
#define RCLUST_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rclust/dataio.hpp"
#include "rclust/pipeline.hpp"
#include "rclust/stats.hpp"

namespace rclust {

// ---- diagnose: autocorrelation audit of the extractor on white noise ----

struct DiagnoseConfig {
    std::size_t seeds = 100;
    std::size_t max_lag = 20;
    std::size_t n_series = 10;
    std::size_t length = 500;
    std::size_t num_features = 500;
    std::size_t kernel_length = 9;
    std::uint64_t base_seed = 0;
    double alpha = 0.05;
    int threads = 1;
};

struct DiagnoseReport {
    // Rejection rate over seeds, per lag (index 0 = lag 1), for each mode.
    std::vector<double> legacy_rejection_by_lag;
    std::vector<double> fixed_rejection_by_lag;
    double legacy_mean_rejection = 0.0;
    double fixed_mean_rejection = 0.0;
    std::string render_markdown() const;
};

// For each seed: white-noise dataset, bank fitted in legacy-sorted and
// permuted-quantiles modes, Ljung-Box over the transformed feature vector
// (feature index as the sequence axis).
DiagnoseReport run_diagnose(const DiagnoseConfig& config);

// ---- scale: timing sweeps and log-log slopes ----

struct ScalePoint {
    std::size_t n_series = 0;
    std::size_t length = 0;
    double wall_ms = 0.0;
};

struct ScaleReport {
    std::vector<ScalePoint> length_sweep;  // fixed size, varying length
    std::vector<ScalePoint> size_sweep;    // fixed length, varying size
    double length_slope = 0.0;             // log(time) vs log(length)
    double size_slope = 0.0;               // log(time) vs log(size)
    std::string render_markdown() const;
};

struct ScaleConfig {
    std::vector<std::size_t> lengths = {1000, 2000, 4000, 8000, 16000, 32000, 64000};
    std::size_t length_sweep_series = 100;
    std::vector<std::size_t> sizes = {500, 1000, 2000, 4000, 8000, 16000};
    std::size_t size_sweep_length = 600;
    std::size_t classes = 5;
    std::size_t num_features = 500;
    std::uint64_t seed = 0;
    int threads = 1;
};

ScaleReport run_scale(const ScaleConfig& config);

// ---- tune: hyperparameter grid over (kernels x kernel length) ----

struct TuneCell {
    std::size_t num_features = 0;
    std::size_t kernel_length = 0;
    double mean_rank = 0.0;
    double mean_ari = 0.0;
    std::size_t wins = 0;
};

// Runs the restart protocol for every grid cell on every dataset, then
// aggregates cells as if they were competing algorithms. Rows sorted by
// mean rank.
std::vector<TuneCell> run_tune(const std::vector<TimeSeriesDataset>& datasets,
                               const std::vector<std::size_t>& kernel_counts,
                               const std::vector<std::size_t>& kernel_lengths,
                               const PipelineConfig& base_config, std::uint64_t base_seed);

std::string render_tune_markdown(const std::vector<TuneCell>& cells);

// ---- benchmark helpers ----

struct ManifestEntry {
    std::string name;
    std::string train_path;
    std::string test_path;  // may be empty
};

// One dataset per line: name,train_path[,test_path]. '#' starts a comment.
std::vector<ManifestEntry> load_manifest(const std::string& path);

// External per-dataset scores: CSV with header "dataset,Alg1,Alg2,...".
ScoreTable load_external_scores(const std::string& path);

struct BenchmarkReport {
    ScoreTable table;                       // our column plus any external ones
    std::vector<AlgorithmSummary> summary;  // mean rank / mean ARI / wins
    std::optional<TestResult> friedman;     // present when >= 2 algorithms
    std::optional<PairwiseReport> pairwise;
    std::string render_markdown() const;
    std::string scores_csv() const;
};

// Scores every manifest dataset with the pipeline, merges optional external
// algorithm columns, and runs Friedman + Wilcoxon/Holm when comparable.
// `all_pairs` switches the pairwise set from control-vs-rest to all pairs.
BenchmarkReport run_benchmark(const std::vector<TimeSeriesDataset>& datasets,
                              const PipelineConfig& config, std::uint64_t base_seed,
                              const ScoreTable* external, bool all_pairs, double alpha = 0.05);

// Least-squares slope of log(y) vs log(x); shared by the scale sweeps.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rclust

#endif
