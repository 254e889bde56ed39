#include "rclust/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "rclust/metrics.hpp"

namespace rclust {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t next = line.find(sep, pos);
        out.push_back(line.substr(pos, (next == std::string::npos ? line.size() : next) - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

DiagnoseReport run_diagnose(const DiagnoseConfig& config) {
    DiagnoseReport report;
    report.legacy_rejection_by_lag.assign(config.max_lag, 0.0);
    report.fixed_rejection_by_lag.assign(config.max_lag, 0.0);

    for (std::size_t s = 0; s < config.seeds; ++s) {
        const std::uint64_t seed = config.base_seed + s;
        RandomStream noise(seed, "noise");
        const TimeSeriesDataset ds =
            synth_dataset(SynthKind::WhiteNoise, config.n_series, config.length, 1, noise);

        for (int legacy = 0; legacy <= 1; ++legacy) {
            BankConfig bc;
            bc.num_features = config.num_features;
            bc.kernel_length = config.kernel_length;
            bc.seed = seed;
            bc.bias_mode = legacy ? BiasMode::LegacySorted : BiasMode::PermutedQuantiles;
            const FeatureBank bank = fit_bank(bc, ds);
            const FeatureMatrix fm = transform_dataset(ds, bank, config.threads);

            // The transformed vector of the first series, feature index as
            // the sequence axis.
            const auto results = ljung_box(fm.values.row(0), config.max_lag, config.alpha);
            auto& bucket =
                legacy ? report.legacy_rejection_by_lag : report.fixed_rejection_by_lag;
            for (std::size_t h = 0; h < config.max_lag; ++h) {
                if (results[h].rejected) bucket[h] += 1.0;
            }
        }
    }

    const double denom = static_cast<double>(config.seeds);
    for (std::size_t h = 0; h < config.max_lag; ++h) {
        report.legacy_rejection_by_lag[h] /= denom;
        report.fixed_rejection_by_lag[h] /= denom;
        report.legacy_mean_rejection += report.legacy_rejection_by_lag[h];
        report.fixed_mean_rejection += report.fixed_rejection_by_lag[h];
    }
    report.legacy_mean_rejection /= static_cast<double>(config.max_lag);
    report.fixed_mean_rejection /= static_cast<double>(config.max_lag);
    return report;
}

std::string DiagnoseReport::render_markdown() const {
    std::ostringstream os;
    os << "| lag | legacy-sorted rejection rate | permuted-quantiles rejection rate |\n";
    os << "|---|---|---|\n";
    for (std::size_t h = 0; h < legacy_rejection_by_lag.size(); ++h) {
        os << "| " << (h + 1) << " | " << legacy_rejection_by_lag[h] << " | "
           << fixed_rejection_by_lag[h] << " |\n";
    }
    os << "\nmean rejection rate: legacy-sorted " << legacy_mean_rejection
       << ", permuted-quantiles " << fixed_mean_rejection << "\n";
    return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need two samples of equal length >= 2");
    }
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double nn = static_cast<double>(n);
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

ScaleReport run_scale(const ScaleConfig& config) {
    using clock_type = std::chrono::steady_clock;
    ScaleReport report;

    PipelineConfig pc;
    pc.bank.num_features = config.num_features;
    pc.k = config.classes;
    pc.runs = 1;
    pc.threads = config.threads;

    auto time_point = [&](std::size_t n, std::size_t length) {
        RandomStream gen(config.seed, "noise");
        const TimeSeriesDataset ds =
            synth_dataset(SynthKind::BlobsSine, n, length, config.classes, gen);
        const auto t0 = clock_type::now();
        run_once(ds, pc, config.seed);
        return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
    };

    for (std::size_t length : config.lengths) {
        report.length_sweep.push_back(
            {config.length_sweep_series, length,
             time_point(config.length_sweep_series, length)});
    }
    for (std::size_t n : config.sizes) {
        report.size_sweep.push_back(
            {n, config.size_sweep_length, time_point(n, config.size_sweep_length)});
    }

    std::vector<double> xs, ys;
    for (const auto& p : report.length_sweep) {
        xs.push_back(static_cast<double>(p.length));
        ys.push_back(p.wall_ms);
    }
    report.length_slope = loglog_slope(xs, ys);
    xs.clear();
    ys.clear();
    for (const auto& p : report.size_sweep) {
        xs.push_back(static_cast<double>(p.n_series));
        ys.push_back(p.wall_ms);
    }
    report.size_slope = loglog_slope(xs, ys);
    return report;
}

std::string ScaleReport::render_markdown() const {
    std::ostringstream os;
    os << "| sweep | n_series | length | wall ms |\n|---|---|---|---|\n";
    for (const auto& p : length_sweep) {
        os << "| length | " << p.n_series << " | " << p.length << " | " << p.wall_ms << " |\n";
    }
    for (const auto& p : size_sweep) {
        os << "| size | " << p.n_series << " | " << p.length << " | " << p.wall_ms << " |\n";
    }
    os << "\nlog-log slope vs length: " << length_slope
       << "\nlog-log slope vs size: " << size_slope << "\n";
    return os.str();
}

std::vector<TuneCell> run_tune(const std::vector<TimeSeriesDataset>& datasets,
                               const std::vector<std::size_t>& kernel_counts,
                               const std::vector<std::size_t>& kernel_lengths,
                               const PipelineConfig& base_config, std::uint64_t base_seed) {
    if (datasets.empty() || kernel_counts.empty() || kernel_lengths.empty()) {
        throw std::invalid_argument("run_tune: empty grid or dataset list");
    }
    std::vector<TuneCell> cells;
    ScoreTable table;
    for (const auto& ds : datasets) table.dataset_names.push_back(ds.name);
    table.scores = Matrix(datasets.size(), kernel_counts.size() * kernel_lengths.size());

    std::size_t col = 0;
    for (std::size_t kc : kernel_counts) {
        for (std::size_t kl : kernel_lengths) {
            TuneCell cell;
            cell.num_features = kc;
            cell.kernel_length = kl;
            table.algorithm_names.push_back(std::to_string(kc) + "-" + std::to_string(kl));
            for (std::size_t d = 0; d < datasets.size(); ++d) {
                PipelineConfig pc = base_config;
                pc.bank.num_features = kc;
                pc.bank.kernel_length = kl;
                if (datasets[d].labels) {
                    int max_label = 0;
                    for (int l : *datasets[d].labels) max_label = std::max(max_label, l);
                    pc.k = static_cast<std::size_t>(max_label) + 1;
                }
                const RunOutcome outcome = run_protocol(datasets[d], pc, base_seed);
                table.scores(d, col) = outcome.best_ari.value_or(0.0);
            }
            cells.push_back(cell);
            ++col;
        }
    }

    const auto summary = aggregate(table);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        cells[c].mean_rank = summary[c].mean_rank;
        cells[c].mean_ari = summary[c].mean_score;
        cells[c].wins = summary[c].wins;
    }
    std::stable_sort(cells.begin(), cells.end(), [](const TuneCell& a, const TuneCell& b) {
        return a.mean_rank < b.mean_rank;
    });
    return cells;
}

std::string render_tune_markdown(const std::vector<TuneCell>& cells) {
    std::ostringstream os;
    os << "| configuration | mean rank | mean ARI | wins |\n|---|---|---|---|\n";
    for (const auto& c : cells) {
        os << "| " << c.num_features << "-" << c.kernel_length << " | " << c.mean_rank
           << " | " << c.mean_ari << " | " << c.wins << " |\n";
    }
    return os.str();
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open manifest: " + path);
    }
    std::vector<ManifestEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = split(t, ',');
        if (fields.size() < 2 || fields.size() > 3) {
            throw ParseError(path + ": line " + std::to_string(lineno) +
                                     ": expected name,train_path[,test_path]");
        }
        ManifestEntry e;
        e.name = trim(fields[0]);
        e.train_path = trim(fields[1]);
        if (fields.size() == 3) e.test_path = trim(fields[2]);
        out.push_back(std::move(e));
    }
    if (out.empty()) {
        throw ParseError(path + ": manifest lists no datasets");
    }
    return out;
}

ScoreTable load_external_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open external scores: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path + ": empty scores file");
    }
    auto header = split(trim(line), ',');
    if (header.size() < 2) {
        throw ParseError(path + ": header must be dataset,<algorithm>...");
    }
    ScoreTable table;
    for (std::size_t j = 1; j < header.size(); ++j) {
        table.algorithm_names.push_back(trim(header[j]));
    }
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto fields = split(t, ',');
        if (fields.size() != header.size()) {
            throw ParseError(path + ": line " + std::to_string(lineno) +
                                     ": wrong number of columns");
        }
        table.dataset_names.push_back(trim(fields[0]));
        std::vector<double> row;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            try {
                row.push_back(std::stod(fields[j]));
            } catch (const std::exception&) {
                throw ParseError(path + ": line " + std::to_string(lineno) +
                                         ": unparseable score '" + fields[j] + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(path + ": no score rows");
    }
    table.scores = Matrix(rows.size(), table.algorithm_names.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) table.scores(i, j) = rows[i][j];
    }
    return table;
}

BenchmarkReport run_benchmark(const std::vector<TimeSeriesDataset>& datasets,
                              const PipelineConfig& config, std::uint64_t base_seed,
                              const ScoreTable* external, bool all_pairs, double alpha) {
    if (datasets.empty()) {
        throw std::invalid_argument("run_benchmark: no datasets");
    }
    BenchmarkReport report;
    report.table.algorithm_names.push_back("R-Clustering");
    std::vector<double> ours;
    for (const auto& ds : datasets) {
        report.table.dataset_names.push_back(ds.name);
        PipelineConfig pc = config;
        if (ds.labels) {
            int max_label = 0;
            for (int l : *ds.labels) max_label = std::max(max_label, l);
            pc.k = static_cast<std::size_t>(max_label) + 1;  // true K as input
        }
        const RunOutcome outcome = run_protocol(ds, pc, base_seed);
        ours.push_back(outcome.best_ari.value_or(0.0));
    }

    std::size_t ncols = 1;
    if (external) {
        if (external->dataset_names != report.table.dataset_names) {
            throw std::invalid_argument(
                "run_benchmark: external score rows do not match the manifest datasets");
        }
        ncols += external->algorithm_names.size();
        for (const auto& n : external->algorithm_names) {
            report.table.algorithm_names.push_back(n);
        }
    }
    report.table.scores = Matrix(datasets.size(), ncols);
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        report.table.scores(i, 0) = ours[i];
        for (std::size_t j = 1; j < ncols; ++j) {
            report.table.scores(i, j) = external->scores(i, j - 1);
        }
    }

    report.summary = aggregate(report.table);
    if (ncols >= 2 && datasets.size() >= 2) {
        report.friedman = friedman_test(report.table.scores, alpha);
        std::vector<PairwiseRow> rows;
        auto column = [&](std::size_t j) {
            std::vector<double> col(datasets.size());
            for (std::size_t i = 0; i < datasets.size(); ++i) col[i] = report.table.scores(i, j);
            return col;
        };
        for (std::size_t a = 0; a < ncols; ++a) {
            const std::size_t b_start = all_pairs ? a + 1 : 1;
            if (!all_pairs && a > 0) break;  // control mode: column 0 vs rest
            for (std::size_t b = b_start; b < ncols; ++b) {
                if (b == a) continue;
                const auto xa = column(a);
                const auto xb = column(b);
                const TestResult t = wilcoxon_signed_rank(xa, xb, alpha);
                rows.push_back({report.table.algorithm_names[a],
                                report.table.algorithm_names[b], t.p_value, 0.0, false});
            }
        }
        report.pairwise = holm_adjust(std::move(rows), alpha);
    }
    return report;
}

std::string BenchmarkReport::scores_csv() const {
    std::ostringstream os;
    os << "dataset";
    for (const auto& a : table.algorithm_names) os << ',' << a;
    os << '\n';
    for (std::size_t i = 0; i < table.scores.rows(); ++i) {
        os << table.dataset_names[i];
        for (std::size_t j = 0; j < table.scores.cols(); ++j) os << ',' << table.scores(i, j);
        os << '\n';
    }
    return os.str();
}

std::string BenchmarkReport::render_markdown() const {
    std::ostringstream os;
    os << "## Scores\n\n| dataset |";
    for (const auto& a : table.algorithm_names) os << ' ' << a << " |";
    os << "\n|---|";
    for (std::size_t j = 0; j < table.algorithm_names.size(); ++j) os << "---|";
    os << '\n';
    for (std::size_t i = 0; i < table.scores.rows(); ++i) {
        os << "| " << table.dataset_names[i] << " |";
        for (std::size_t j = 0; j < table.scores.cols(); ++j) {
            os << ' ' << table.scores(i, j) << " |";
        }
        os << '\n';
    }
    os << "\n## Aggregate\n\n| algorithm | mean rank | mean ARI | wins |\n|---|---|---|---|\n";
    for (const auto& s : summary) {
        os << "| " << s.name << " | " << s.mean_rank << " | " << s.mean_score << " | "
           << s.wins << " |\n";
    }
    if (friedman) {
        os << "\nFriedman chi-square = " << friedman->statistic
           << ", p = " << friedman->p_value << " ("
           << (friedman->rejected ? "rejected" : "not rejected") << " at alpha "
           << friedman->alpha_used << ")\n";
    }
    if (pairwise) {
        os << "\n## Pairwise comparisons\n\n" << pairwise->to_markdown();
    }
    return os.str();
}

}  // namespace rclust
