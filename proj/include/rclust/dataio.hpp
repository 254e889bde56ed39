#ifndef RCLUST_DATAIO_HPP
#define RCLUST_DATAIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rclust/dataset.hpp"
#include "rclust/kernelbank.hpp"
#include "rclust/randkit.hpp"
#include "rclust/reduce.hpp"

namespace rclust {

enum class MergePolicy { Merge, TrainOnly, TestOnly };

struct DatasetSource {
    std::string train_path;
    std::string test_path;
    MergePolicy merge_policy = MergePolicy::Merge;
    bool z_normalize = false;  // UCR data arrives normalized; off by default
};

// Parse failure with file/line/column context in what().
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// UCR TSV: one series per row, first column the class label, the rest the
// observations. Labels are densified to 0..C-1 in sorted original order.
// Ragged rows, NaN/Inf and unparseable tokens are hard errors.
TimeSeriesDataset load_ucr_tsv(const DatasetSource& source);

// Writes a dataset back to UCR TSV with enough precision to round-trip.
void save_ucr_tsv(const TimeSeriesDataset& dataset, const std::string& path);

enum class SynthKind { BlobsSine, WhiteNoise };

// Desk-scale fixtures. blobs-sine: class c is a sinusoid with a
// class-specific frequency, random phase per series and Gaussian noise of
// 0.2 x amplitude. white-noise: iid standard Gaussian.
TimeSeriesDataset synth_dataset(SynthKind kind, std::size_t n, std::size_t length,
                                std::size_t classes, RandomStream& stream);

struct ResultRecord {
    std::string dataset;
    std::string config;
    std::uint64_t seed = 0;
    std::size_t runs = 0;
    std::vector<double> ari_runs;  // empty when the dataset is unlabeled
    double best_ari = 0.0;
    double wall_ms = 0.0;
    std::size_t retained_dims = 0;
};

enum class OutputFormat { Csv, Json, Markdown };

// CSV columns: dataset,config,seed,runs,ari_runs,best_ari,wall_ms,retained_dims
// (ari_runs semicolon-separated). JSON is a top-level array of objects with
// the same keys.
void write_results(const std::vector<ResultRecord>& records, const std::string& path,
                   OutputFormat format);
std::string render_results(const std::vector<ResultRecord>& records, OutputFormat format);
std::vector<ResultRecord> read_results_json(const std::string& path);

// Bank (+ optional PCA model) artifact for --save-bank / --load-bank.
void save_artifact(const std::string& path, const FeatureBank& bank,
                   const PcaModel* pca = nullptr);
struct Artifact {
    FeatureBank bank;
    std::optional<PcaModel> pca;
};
Artifact load_artifact(const std::string& path);

// FeatureMatrix CSV dump for --dump-features.
void write_feature_csv(const Matrix& features, const std::string& path);

OutputFormat format_from_string(const std::string& s);
MergePolicy merge_policy_from_string(const std::string& s);

}  // namespace rclust

#endif
