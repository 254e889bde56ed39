#include "rclust/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace rclust {
namespace {

using nlohmann::json;

struct RawRows {
    std::vector<double> raw_labels;
    std::vector<std::vector<double>> rows;
};

RawRows parse_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open dataset file: " + path);
    }
    RawRows out;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> fields;
        std::size_t col = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t tab = line.find('\t', pos);
            const std::string tok =
                line.substr(pos, (tab == std::string::npos ? line.size() : tab) - pos);
            ++col;
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &consumed);
            } catch (const std::exception&) {
                throw ParseError(path + ": line " + std::to_string(lineno) + ", column " +
                                 std::to_string(col) + ": unparseable token '" + tok + "'");
            }
            if (consumed != tok.size()) {
                throw ParseError(path + ": line " + std::to_string(lineno) + ", column " +
                                 std::to_string(col) + ": trailing junk in token '" + tok + "'");
            }
            if (!std::isfinite(v)) {
                throw ParseError(path + ": line " + std::to_string(lineno) + ", column " +
                                 std::to_string(col) + ": non-finite value");
            }
            fields.push_back(v);
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (fields.size() < 2) {
            throw ParseError(path + ": line " + std::to_string(lineno) +
                             ": expected a label and at least one observation");
        }
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw ParseError(path + ": line " + std::to_string(lineno) +
                             ": row width " + std::to_string(fields.size()) +
                             " differs from " + std::to_string(width) +
                             " (variable-length series are unsupported)");
        }
        out.raw_labels.push_back(fields[0]);
        fields.erase(fields.begin());
        out.rows.push_back(std::move(fields));
    }
    if (out.rows.empty()) {
        throw ParseError(path + ": empty dataset file");
    }
    return out;
}

void append(RawRows& dst, RawRows&& src) {
    if (!dst.rows.empty() && src.rows[0].size() != dst.rows[0].size()) {
        throw ParseError("train/test series lengths differ");
    }
    for (std::size_t i = 0; i < src.rows.size(); ++i) {
        dst.raw_labels.push_back(src.raw_labels[i]);
        dst.rows.push_back(std::move(src.rows[i]));
    }
}

std::string basename_no_ext(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

json pca_to_json(const PcaModel& m) {
    json comps = json::array();
    for (std::size_t c = 0; c < m.components.rows(); ++c) {
        auto row = m.components.row(c);
        comps.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return json{{"means", m.means},
                {"components", comps},
                {"explained_variance", m.explained_variance},
                {"explained_variance_ratio", m.explained_variance_ratio},
                {"retained", m.retained}};
}

PcaModel pca_from_json(const json& j) {
    PcaModel m;
    m.means = j.at("means").get<std::vector<double>>();
    const auto& comps = j.at("components");
    m.components = Matrix(comps.size(), m.means.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto row = comps[c].get<std::vector<double>>();
        for (std::size_t k = 0; k < row.size(); ++k) m.components(c, k) = row[k];
    }
    m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
    m.explained_variance_ratio = j.at("explained_variance_ratio").get<std::vector<double>>();
    m.retained = j.at("retained").get<std::size_t>();
    return m;
}

}  // namespace

TimeSeriesDataset load_ucr_tsv(const DatasetSource& source) {
    RawRows raw;
    std::string name;
    switch (source.merge_policy) {
        case MergePolicy::TrainOnly:
            raw = parse_tsv(source.train_path);
            name = basename_no_ext(source.train_path);
            break;
        case MergePolicy::TestOnly:
            raw = parse_tsv(source.test_path);
            name = basename_no_ext(source.test_path);
            break;
        case MergePolicy::Merge:
            raw = parse_tsv(source.train_path);
            name = basename_no_ext(source.train_path);
            if (!source.test_path.empty()) {
                append(raw, parse_tsv(source.test_path));
            }
            break;
    }

    // Densify labels in sorted original order, e.g. {2,5,9} -> {0,1,2}.
    std::vector<double> uniq = raw.raw_labels;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::map<double, int> dense;
    for (std::size_t i = 0; i < uniq.size(); ++i) dense[uniq[i]] = static_cast<int>(i);

    TimeSeriesDataset ds;
    ds.name = name;
    const std::size_t n = raw.rows.size();
    const std::size_t len = raw.rows[0].size();
    ds.values = Matrix(n, len);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = dense[raw.raw_labels[i]];
        auto dst = ds.values.row(i);
        std::copy(raw.rows[i].begin(), raw.rows[i].end(), dst.begin());
    }
    ds.labels = std::move(labels);

    if (source.z_normalize) {
        for (std::size_t i = 0; i < n; ++i) {
            auto row = ds.values.row(i);
            double mean = 0.0;
            for (double v : row) mean += v;
            mean /= static_cast<double>(len);
            double var = 0.0;
            for (double v : row) var += (v - mean) * (v - mean);
            const double sd = std::sqrt(var / static_cast<double>(len));
            for (double& v : row) v = sd > 0.0 ? (v - mean) / sd : 0.0;
        }
    }
    return ds;
}

void save_ucr_tsv(const TimeSeriesDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write dataset file: " + path);
    }
    char buf[40];
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const int label = dataset.labels ? (*dataset.labels)[i] : 0;
        out << label;
        for (double v : dataset.values.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << '\t' << buf;
        }
        out << '\n';
    }
}

TimeSeriesDataset synth_dataset(SynthKind kind, std::size_t n, std::size_t length,
                                std::size_t classes, RandomStream& stream) {
    if (classes == 0 || n < classes) {
        throw std::invalid_argument("synth_dataset: need n >= classes >= 1");
    }
    TimeSeriesDataset ds;
    ds.values = Matrix(n, length);
    std::vector<int> labels(n);
    if (kind == SynthKind::WhiteNoise) {
        ds.name = "white-noise";
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(i % classes);
            auto row = ds.values.row(i);
            for (double& v : row) v = stream.gaussian();
        }
    } else {
        ds.name = "blobs-sine";
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = i % classes;
            labels[i] = static_cast<int>(c);
            // Class frequencies 3, 7, 11, ... cycles over the series.
            const double cycles = 3.0 + 4.0 * static_cast<double>(c);
            const double phase = stream.next_real() * 2.0 * std::numbers::pi;
            auto row = ds.values.row(i);
            for (std::size_t t = 0; t < length; ++t) {
                const double arg =
                    2.0 * std::numbers::pi * cycles * static_cast<double>(t) /
                        static_cast<double>(length) +
                    phase;
                row[t] = std::sin(arg) + 0.2 * stream.gaussian();
            }
        }
    }
    ds.labels = std::move(labels);
    return ds;
}

std::string render_results(const std::vector<ResultRecord>& records, OutputFormat format) {
    std::ostringstream os;
    auto join_runs = [](const std::vector<double>& runs) {
        std::ostringstream rs;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (i) rs << ';';
            rs << runs[i];
        }
        return rs.str();
    };
    switch (format) {
        case OutputFormat::Csv:
            os << "dataset,config,seed,runs,ari_runs,best_ari,wall_ms,retained_dims\n";
            for (const auto& r : records) {
                os << r.dataset << ',' << r.config << ',' << r.seed << ',' << r.runs << ','
                   << join_runs(r.ari_runs) << ',' << r.best_ari << ',' << r.wall_ms << ','
                   << r.retained_dims << '\n';
            }
            break;
        case OutputFormat::Json: {
            json arr = json::array();
            for (const auto& r : records) {
                arr.push_back(json{{"dataset", r.dataset},
                                   {"config", r.config},
                                   {"seed", r.seed},
                                   {"runs", r.runs},
                                   {"ari_runs", r.ari_runs},
                                   {"best_ari", r.best_ari},
                                   {"wall_ms", r.wall_ms},
                                   {"retained_dims", r.retained_dims}});
            }
            os << arr.dump(2) << '\n';
            break;
        }
        case OutputFormat::Markdown:
            os << "| dataset | config | seed | runs | best ARI | wall ms | dims |\n";
            os << "|---|---|---|---|---|---|---|\n";
            for (const auto& r : records) {
                os << "| " << r.dataset << " | " << r.config << " | " << r.seed << " | "
                   << r.runs << " | " << r.best_ari << " | " << r.wall_ms << " | "
                   << r.retained_dims << " |\n";
            }
            break;
    }
    return os.str();
}

void write_results(const std::vector<ResultRecord>& records, const std::string& path,
                   OutputFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write results file: " + path);
    }
    out << render_results(records, format);
}

std::vector<ResultRecord> read_results_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open results file: " + path);
    }
    json arr = json::parse(in);
    std::vector<ResultRecord> out;
    for (const auto& j : arr) {
        ResultRecord r;
        r.dataset = j.at("dataset").get<std::string>();
        r.config = j.at("config").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.runs = j.at("runs").get<std::size_t>();
        r.ari_runs = j.at("ari_runs").get<std::vector<double>>();
        r.best_ari = j.at("best_ari").get<double>();
        r.wall_ms = j.at("wall_ms").get<double>();
        r.retained_dims = j.at("retained_dims").get<std::size_t>();
        out.push_back(std::move(r));
    }
    return out;
}

void save_artifact(const std::string& path, const FeatureBank& bank, const PcaModel* pca) {
    json features = json::array();
    for (const auto& f : bank.features) {
        features.push_back(json{{"weights", f.weights},
                                {"dilation", f.dilation},
                                {"bias", f.bias},
                                {"quantile_level", f.quantile_level}});
    }
    json doc{{"format", "rclust-bank-v1"},
             {"config",
              {{"num_features", bank.config.num_features},
               {"kernel_length", bank.config.kernel_length},
               {"weight_mode", to_string(bank.config.weight_mode)},
               {"bias_mode", to_string(bank.config.bias_mode)},
               {"seed", bank.config.seed}}},
             {"fitted_input_length", bank.fitted_input_length},
             {"features", features}};
    if (pca) doc["pca"] = pca_to_json(*pca);

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write bank artifact: " + path);
    }
    out << doc.dump(2) << '\n';
}

Artifact load_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open bank artifact: " + path);
    }
    json doc = json::parse(in);
    if (doc.value("format", "") != "rclust-bank-v1") {
        throw std::runtime_error(path + ": not an rclust bank artifact");
    }
    Artifact art;
    const auto& cfg = doc.at("config");
    art.bank.config.num_features = cfg.at("num_features").get<std::size_t>();
    art.bank.config.kernel_length = cfg.at("kernel_length").get<std::size_t>();
    art.bank.config.weight_mode = weight_mode_from_string(cfg.at("weight_mode"));
    art.bank.config.bias_mode = bias_mode_from_string(cfg.at("bias_mode"));
    art.bank.config.seed = cfg.at("seed").get<std::uint64_t>();
    art.bank.fitted_input_length = doc.at("fitted_input_length").get<std::size_t>();
    for (const auto& j : doc.at("features")) {
        KernelFeature f;
        f.weights = j.at("weights").get<std::vector<double>>();
        f.dilation = j.at("dilation").get<std::size_t>();
        f.bias = j.at("bias").get<double>();
        f.quantile_level = j.at("quantile_level").get<double>();
        art.bank.features.push_back(std::move(f));
    }
    if (art.bank.features.size() != art.bank.config.num_features) {
        throw std::runtime_error(path + ": feature count does not match config");
    }
    if (doc.contains("pca")) art.pca = pca_from_json(doc["pca"]);
    return art;
}

void write_feature_csv(const Matrix& features, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write feature dump: " + path);
    }
    char buf[40];
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto row = features.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", row[j]);
            out << buf;
        }
        out << '\n';
    }
}

OutputFormat format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "markdown" || s == "md") return OutputFormat::Markdown;
    throw std::invalid_argument("unknown output format: " + s);
}

MergePolicy merge_policy_from_string(const std::string& s) {
    if (s == "merge") return MergePolicy::Merge;
    if (s == "train-only") return MergePolicy::TrainOnly;
    if (s == "test-only") return MergePolicy::TestOnly;
    throw std::invalid_argument("unknown merge policy: " + s);
}

}  // namespace rclust
