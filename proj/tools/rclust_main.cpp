// rclust: time-series clustering with random convolutional features,
// plus the evaluation commands (benchmark, diagnose, tune, scale).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rclust/experiments.hpp"
#include "rclust/metrics.hpp"
#include "rclust/pipeline.hpp"

namespace {

using namespace rclust;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::size_t kernels = 500;
    std::size_t kernel_length = 9;
    double pca_threshold = 0.01;
    bool no_pca = false;
    std::size_t runs = 10;
    bool legacy_bias = false;
    std::string weight_mode = "sum-zero";
    std::string merge_policy = "merge";
    std::string out;
    std::string format = "csv";
    std::string save_bank;
    std::string load_bank;
    std::string dump_features;
    bool fixed_bank = false;
    int threads = 0;  // 0 = RCLUST_THREADS env or hardware
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RCLUST_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

PipelineConfig make_pipeline_config(const GlobalOpts& g) {
    PipelineConfig pc;
    pc.bank.num_features = g.kernels;
    pc.bank.kernel_length = g.kernel_length;
    pc.bank.weight_mode = weight_mode_from_string(g.weight_mode);
    pc.bank.bias_mode = g.legacy_bias ? BiasMode::LegacySorted : BiasMode::PermutedQuantiles;
    pc.pca_enabled = !g.no_pca;
    pc.pca_threshold = g.pca_threshold;
    pc.runs = g.runs;
    pc.fixed_bank = g.fixed_bank;
    pc.threads = resolve_threads(g.threads);
    return pc;
}

void add_global_flags(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--seed", g.seed, "base random seed (default 0)");
    cmd->add_option("--kernels", g.kernels, "number of random kernels (default 500)");
    cmd->add_option("--kernel-length", g.kernel_length, "kernel length, odd (default 9)");
    cmd->add_option("--pca-threshold", g.pca_threshold,
                    "explained-variance cutoff per component (default 0.01)");
    cmd->add_flag("--no-pca", g.no_pca, "skip the PCA stage");
    cmd->add_option("--runs", g.runs, "restarts per dataset, best ARI kept (default 10)");
    cmd->add_flag("--legacy-bias", g.legacy_bias,
                  "legacy sorted-quantile bias assignment (for diagnostics)");
    cmd->add_option("--weight-mode", g.weight_mode, "sum-zero | iid (default sum-zero)");
    cmd->add_option("--merge-policy", g.merge_policy,
                    "merge | train-only | test-only (default merge)");
    cmd->add_option("--out", g.out, "output file path");
    cmd->add_option("--format", g.format, "csv | json | markdown (default csv)");
    cmd->add_option("--save-bank", g.save_bank, "write the fitted bank artifact (JSON)");
    cmd->add_option("--load-bank", g.load_bank, "reuse a saved bank artifact");
    cmd->add_option("--dump-features", g.dump_features, "dump the PPV feature matrix as CSV");
    cmd->add_flag("--fixed-bank", g.fixed_bank,
                  "restarts vary only the K-means init, not the bank");
    cmd->add_option("--threads", g.threads, "worker threads (default: RCLUST_THREADS or all)");
}

void require_file(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        throw CLI::ValidationError("file not found: " + path);
    }
}

TimeSeriesDataset load_dataset(const std::string& train, const std::string& test,
                               const GlobalOpts& g) {
    require_file(train);
    if (!test.empty()) require_file(test);
    DatasetSource src;
    src.train_path = train;
    src.test_path = test;
    src.merge_policy = merge_policy_from_string(g.merge_policy);
    if (src.merge_policy == MergePolicy::TestOnly && test.empty()) {
        throw CLI::ValidationError("--merge-policy test-only needs a TEST file");
    }
    return load_ucr_tsv(src);
}

int cmd_cluster(const GlobalOpts& g, const std::string& train, const std::string& test,
                std::size_t k) {
    TimeSeriesDataset ds = load_dataset(train, test, g);
    PipelineConfig pc = make_pipeline_config(g);
    pc.k = k;

    std::optional<Artifact> artifact;
    const FeatureBank* bank = nullptr;
    if (!g.load_bank.empty()) {
        require_file(g.load_bank);
        artifact = load_artifact(g.load_bank);
        bank = &artifact->bank;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const RunOutcome outcome = run_protocol(ds, pc, g.seed, bank);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();

    if (!g.save_bank.empty()) {
        BankConfig bc = pc.bank;
        bc.seed = g.seed;
        const FeatureBank fitted = bank ? *bank : fit_bank(bc, ds);
        const FeatureMatrix fm = transform_dataset(ds, fitted, pc.threads);
        if (pc.pca_enabled) {
            const PcaModel pca = fit_pca(fm.values, pc.pca_threshold);
            save_artifact(g.save_bank, fitted, &pca);
        } else {
            save_artifact(g.save_bank, fitted, nullptr);
        }
    }
    if (!g.dump_features.empty()) {
        BankConfig bc = pc.bank;
        bc.seed = g.seed;
        const FeatureBank fitted = bank ? *bank : fit_bank(bc, ds);
        const FeatureMatrix fm = transform_dataset(ds, fitted, pc.threads);
        write_feature_csv(fm.values, g.dump_features);
    }

    ResultRecord rec;
    rec.dataset = ds.name;
    rec.config = pc.describe();
    rec.seed = g.seed;
    rec.runs = pc.runs;
    for (const auto& run : outcome.runs) {
        if (run.ari) rec.ari_runs.push_back(*run.ari);
    }
    rec.best_ari = outcome.best_ari.value_or(0.0);
    rec.wall_ms = wall_ms;
    rec.retained_dims = outcome.retained_dims;
    if (!g.out.empty()) {
        write_results({rec}, g.out, format_from_string(g.format));
    }

    std::cout << "dataset=" << ds.name << " n=" << ds.size() << " length=" << ds.length()
              << " k=" << k;
    if (outcome.best_ari) std::cout << " best_ari=" << *outcome.best_ari;
    std::cout << " retained_dims=" << outcome.retained_dims << " wall_ms=" << wall_ms
              << "\nstage_ms bank=" << outcome.total_timings.bank_ms
              << " transform=" << outcome.total_timings.transform_ms
              << " pca=" << outcome.total_timings.pca_ms
              << " kmeans=" << outcome.total_timings.kmeans_ms << std::endl;
    return kExitOk;
}

int cmd_benchmark(const GlobalOpts& g, const std::string& manifest_path,
                  const std::string& external_path, bool all_pairs) {
    require_file(manifest_path);
    const auto manifest = load_manifest(manifest_path);
    std::vector<TimeSeriesDataset> datasets;
    for (const auto& e : manifest) {
        TimeSeriesDataset ds = load_dataset(e.train_path, e.test_path, g);
        ds.name = e.name;
        datasets.push_back(std::move(ds));
    }
    std::optional<ScoreTable> external;
    if (!external_path.empty()) {
        require_file(external_path);
        external = load_external_scores(external_path);
    }
    const PipelineConfig pc = make_pipeline_config(g);
    const BenchmarkReport report =
        run_benchmark(datasets, pc, g.seed, external ? &*external : nullptr, all_pairs);

    if (!g.out.empty()) {
        std::ofstream out(g.out);
        if (!out) throw std::runtime_error("cannot write " + g.out);
        out << (format_from_string(g.format) == OutputFormat::Markdown
                    ? report.render_markdown()
                    : report.scores_csv());
        if (report.pairwise && format_from_string(g.format) == OutputFormat::Csv) {
            out << '\n' << report.pairwise->to_csv();
        }
    }
    std::cout << report.render_markdown();
    return kExitOk;
}

int cmd_diagnose(const GlobalOpts& g, std::size_t seeds, std::size_t lags,
                 std::size_t n_series, std::size_t length) {
    DiagnoseConfig dc;
    dc.seeds = seeds;
    dc.max_lag = lags;
    dc.n_series = n_series;
    dc.length = length;
    dc.num_features = g.kernels;
    dc.kernel_length = g.kernel_length;
    dc.base_seed = g.seed;
    dc.threads = resolve_threads(g.threads);
    const DiagnoseReport report = run_diagnose(dc);
    std::cout << report.render_markdown();
    if (!g.out.empty()) {
        std::ofstream out(g.out);
        if (!out) throw std::runtime_error("cannot write " + g.out);
        out << report.render_markdown();
    }
    return kExitOk;
}

int cmd_tune(const GlobalOpts& g, const std::string& manifest_path,
             std::vector<std::size_t> grid_kernels, std::vector<std::size_t> grid_lengths) {
    require_file(manifest_path);
    const auto manifest = load_manifest(manifest_path);
    std::vector<TimeSeriesDataset> datasets;
    for (const auto& e : manifest) {
        TimeSeriesDataset ds = load_dataset(e.train_path, e.test_path, g);
        ds.name = e.name;
        datasets.push_back(std::move(ds));
    }
    if (grid_kernels.empty()) grid_kernels = {100, 500, 1000, 5000, 10000};
    if (grid_lengths.empty()) grid_lengths = {7, 9, 11, 13};
    PipelineConfig pc = make_pipeline_config(g);
    const auto cells = run_tune(datasets, grid_kernels, grid_lengths, pc, g.seed);
    const std::string rendered = render_tune_markdown(cells);
    std::cout << rendered;
    if (!g.out.empty()) {
        std::ofstream out(g.out);
        if (!out) throw std::runtime_error("cannot write " + g.out);
        out << rendered;
    }
    return kExitOk;
}

int cmd_scale(const GlobalOpts& g, std::vector<std::size_t> lengths,
              std::vector<std::size_t> sizes) {
    ScaleConfig sc;
    if (!lengths.empty()) sc.lengths = std::move(lengths);
    if (!sizes.empty()) sc.sizes = std::move(sizes);
    sc.num_features = g.kernels;
    sc.seed = g.seed;
    sc.threads = resolve_threads(g.threads);
    const ScaleReport report = run_scale(sc);
    std::cout << report.render_markdown();
    if (!g.out.empty()) {
        std::ofstream out(g.out);
        if (!out) throw std::runtime_error("cannot write " + g.out);
        out << report.render_markdown();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"R-Clustering: random-kernel time-series clustering"};
    app.require_subcommand(1);

    GlobalOpts g;

    auto* cluster = app.add_subcommand("cluster", "cluster one dataset");
    std::string train, test;
    std::size_t k = 2;
    cluster->add_option("train", train, "TRAIN TSV path")->required();
    cluster->add_option("test", test, "TEST TSV path (optional)");
    cluster->add_option("-k,--clusters", k, "number of clusters")->required();
    add_global_flags(cluster, g);

    auto* benchmark = app.add_subcommand("benchmark", "score a manifest of datasets");
    std::string manifest_path, external_path;
    bool all_pairs = false;
    benchmark->add_option("manifest", manifest_path, "manifest: name,train[,test] per line")
        ->required();
    benchmark->add_option("--external", external_path,
                          "CSV of per-dataset ARI columns for other algorithms");
    benchmark->add_flag("--all-pairs", all_pairs,
                        "pairwise tests over all algorithm pairs, not control-vs-rest");
    add_global_flags(benchmark, g);

    auto* diagnose = app.add_subcommand(
        "diagnose", "autocorrelation audit of the extractor on white noise; the legacy "
                    "bias mode keeps features in quantile order so the artifact is visible");
    std::size_t dg_seeds = 100, dg_lags = 20, dg_series = 10, dg_length = 500;
    diagnose->add_option("--seeds", dg_seeds, "number of noise seeds (default 100)");
    diagnose->add_option("--lags", dg_lags, "max Ljung-Box lag (default 20)");
    diagnose->add_option("--series", dg_series, "series per dataset (default 10)");
    diagnose->add_option("--length", dg_length, "series length (default 500)");
    add_global_flags(diagnose, g);

    auto* tune = app.add_subcommand("tune", "hyperparameter grid sweep");
    std::vector<std::size_t> grid_kernels, grid_lengths;
    std::string tune_manifest;
    tune->add_option("manifest", tune_manifest, "dataset manifest")->required();
    tune->add_option("--grid-kernels", grid_kernels,
                     "kernel counts (default 100 500 1000 5000 10000)");
    tune->add_option("--grid-lengths", grid_lengths, "kernel lengths (default 7 9 11 13)");
    add_global_flags(tune, g);

    auto* scale = app.add_subcommand("scale", "timing sweeps over length and size");
    std::vector<std::size_t> sc_lengths, sc_sizes;
    scale->add_option("--lengths", sc_lengths, "length sweep (default 1k..64k, 100 series)");
    scale->add_option("--sizes", sc_sizes, "size sweep (default 500..16k, length 600)");
    add_global_flags(scale, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cluster->parsed()) return cmd_cluster(g, train, test, k);
        if (benchmark->parsed()) return cmd_benchmark(g, manifest_path, external_path, all_pairs);
        if (diagnose->parsed()) return cmd_diagnose(g, dg_seeds, dg_lags, dg_series, dg_length);
        if (tune->parsed()) return cmd_tune(g, tune_manifest, grid_kernels, grid_lengths);
        if (scale->parsed()) return cmd_scale(g, sc_lengths, sc_sizes);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const rclust::ParseError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitRuntime;
    }
    return kExitUsage;
}
