#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rclust/dataio.hpp"

using namespace rclust;

namespace {

std::filesystem::path scratch_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("rclust-test-" + name);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

struct FileGuard {
    std::filesystem::path path;
    ~FileGuard() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
};

}  // namespace

TEST_CASE("basic TSV parse with labels densified") {
    const auto path = scratch_file("basic.tsv");
    FileGuard guard{path};
    write_text(path, "1\t0.1\t0.2\n2\t0.3\t0.4\n");
    DatasetSource src;
    src.train_path = path.string();
    src.merge_policy = MergePolicy::TrainOnly;
    const auto ds = load_ucr_tsv(src);
    CHECK(ds.size() == 2);
    CHECK(ds.length() == 2);
    REQUIRE(ds.labels.has_value());
    CHECK((*ds.labels)[0] == 0);
    CHECK((*ds.labels)[1] == 1);
    CHECK(ds.values(0, 0) == doctest::Approx(0.1));
    CHECK(ds.values(1, 1) == doctest::Approx(0.4));
}

TEST_CASE("train and test files merge in order") {
    const auto train = scratch_file("merge-train.tsv");
    const auto test = scratch_file("merge-test.tsv");
    FileGuard g1{train}, g2{test};
    std::string train_text, test_text;
    for (int i = 0; i < 3; ++i) train_text += "1\t" + std::to_string(i) + "\t0\n";
    for (int i = 0; i < 5; ++i) test_text += "2\t" + std::to_string(10 + i) + "\t0\n";
    write_text(train, train_text);
    write_text(test, test_text);
    DatasetSource src;
    src.train_path = train.string();
    src.test_path = test.string();
    src.merge_policy = MergePolicy::Merge;
    const auto ds = load_ucr_tsv(src);
    CHECK(ds.size() == 8);
    CHECK(ds.values(0, 0) == doctest::Approx(0.0));
    CHECK(ds.values(3, 0) == doctest::Approx(10.0));  // test rows follow train rows

    src.merge_policy = MergePolicy::TrainOnly;
    CHECK(load_ucr_tsv(src).size() == 3);
    src.merge_policy = MergePolicy::TestOnly;
    CHECK(load_ucr_tsv(src).size() == 5);
}

TEST_CASE("ragged rows name the offending line") {
    const auto path = scratch_file("ragged.tsv");
    FileGuard guard{path};
    write_text(path, "1\t0.1\t0.2\n2\t0.3\n");
    DatasetSource src;
    src.train_path = path.string();
    src.merge_policy = MergePolicy::TrainOnly;
    try {
        load_ucr_tsv(src);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("bad tokens and non-finite values are rejected") {
    DatasetSource src;
    src.merge_policy = MergePolicy::TrainOnly;

    const auto bad = scratch_file("badtoken.tsv");
    FileGuard g1{bad};
    write_text(bad, "1\t0.1\tpotato\n");
    src.train_path = bad.string();
    CHECK_THROWS_AS(load_ucr_tsv(src), ParseError);

    const auto nan = scratch_file("nan.tsv");
    FileGuard g2{nan};
    write_text(nan, "1\t0.1\tnan\n");
    src.train_path = nan.string();
    CHECK_THROWS_AS(load_ucr_tsv(src), ParseError);

    const auto inf = scratch_file("inf.tsv");
    FileGuard g3{inf};
    write_text(inf, "1\tinf\t0.2\n");
    src.train_path = inf.string();
    CHECK_THROWS_AS(load_ucr_tsv(src), ParseError);

    src.train_path = "/nonexistent/rclust-no-such-file.tsv";
    CHECK_THROWS(load_ucr_tsv(src));
}

TEST_CASE("TSV round-trip is bit exact") {
    TimeSeriesDataset ds;
    ds.name = "roundtrip";
    ds.values = Matrix(3, 4);
    double seedval = 0.1234567890123456789;
    for (double& v : ds.values.data()) {
        v = seedval;
        seedval = seedval * 3.9 * (1.0 - seedval);  // logistic map, awkward decimals
    }
    ds.labels = std::vector<int>{0, 1, 0};
    const auto path = scratch_file("roundtrip.tsv");
    FileGuard guard{path};
    save_ucr_tsv(ds, path.string());
    DatasetSource src;
    src.train_path = path.string();
    src.merge_policy = MergePolicy::TrainOnly;
    const auto back = load_ucr_tsv(src);
    REQUIRE(back.size() == 3);
    REQUIRE(back.length() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(back.values(i, j) == ds.values(i, j));
        }
    }
    CHECK(*back.labels == *ds.labels);
}

TEST_CASE("sparse original labels densify in sorted order") {
    const auto path = scratch_file("sparse-labels.tsv");
    FileGuard guard{path};
    write_text(path, "9\t0\t0\n2\t0\t0\n5\t0\t0\n2\t0\t0\n");
    DatasetSource src;
    src.train_path = path.string();
    src.merge_policy = MergePolicy::TrainOnly;
    const auto ds = load_ucr_tsv(src);
    REQUIRE(ds.labels.has_value());
    CHECK(*ds.labels == std::vector<int>{2, 0, 1, 0});
}

TEST_CASE("z-normalization option centers and scales each series") {
    const auto path = scratch_file("znorm.tsv");
    FileGuard guard{path};
    write_text(path, "1\t1\t2\t3\t4\n");
    DatasetSource src;
    src.train_path = path.string();
    src.merge_policy = MergePolicy::TrainOnly;
    src.z_normalize = true;
    const auto ds = load_ucr_tsv(src);
    double mean = 0.0, var = 0.0;
    for (std::size_t t = 0; t < 4; ++t) mean += ds.values(0, t);
    mean /= 4.0;
    for (std::size_t t = 0; t < 4; ++t) {
        var += (ds.values(0, t) - mean) * (ds.values(0, t) - mean);
    }
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::sqrt(var / 4.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("synthetic dataset fixtures") {
    RandomStream gen(0, "noise");
    const auto blobs = synth_dataset(SynthKind::BlobsSine, 10, 64, 2, gen);
    CHECK(blobs.size() == 10);
    CHECK(blobs.length() == 64);
    REQUIRE(blobs.labels.has_value());
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK((*blobs.labels)[i] == static_cast<int>(i % 2));
    }

    RandomStream gen2(0, "noise");
    const auto again = synth_dataset(SynthKind::BlobsSine, 10, 64, 2, gen2);
    CHECK(again.values == blobs.values);

    RandomStream gen3(1, "noise");
    const auto noise = synth_dataset(SynthKind::WhiteNoise, 6, 32, 1, gen3);
    CHECK(noise.size() == 6);
    double mean = 0.0;
    for (double v : noise.values.data()) mean += v;
    mean /= static_cast<double>(6 * 32);
    CHECK(std::abs(mean) < 0.2);

    RandomStream gen4(2, "noise");
    CHECK_THROWS_AS(synth_dataset(SynthKind::BlobsSine, 0, 64, 2, gen4),
                    std::invalid_argument);
    CHECK_THROWS_AS(synth_dataset(SynthKind::BlobsSine, 4, 64, 0, gen4),
                    std::invalid_argument);
}

TEST_CASE("results render in all three formats and round-trip through JSON") {
    ResultRecord r;
    r.dataset = "toy";
    r.config = "500-9";
    r.seed = 7;
    r.runs = 2;
    r.ari_runs = {0.5, 0.75};
    r.best_ari = 0.75;
    r.wall_ms = 12.5;
    r.retained_dims = 13;
    const std::vector<ResultRecord> records{r};

    const std::string csv = render_results(records, OutputFormat::Csv);
    CHECK(csv.find("dataset,config,seed,runs,ari_runs,best_ari,wall_ms,retained_dims") !=
          std::string::npos);
    CHECK(csv.find("0.5;0.75") != std::string::npos);
    CHECK(csv.find("toy") != std::string::npos);

    const std::string md = render_results(records, OutputFormat::Markdown);
    CHECK(md.find("|") != std::string::npos);
    CHECK(md.find("toy") != std::string::npos);

    const auto path = scratch_file("results.json");
    FileGuard guard{path};
    write_results(records, path.string(), OutputFormat::Json);
    const auto back = read_results_json(path.string());
    REQUIRE(back.size() == 1);
    CHECK(back[0].dataset == "toy");
    CHECK(back[0].config == "500-9");
    CHECK(back[0].seed == 7);
    CHECK(back[0].ari_runs == std::vector<double>{0.5, 0.75});
    CHECK(back[0].best_ari == doctest::Approx(0.75));
    CHECK(back[0].retained_dims == 13);
}

TEST_CASE("bank artifact round-trips, with and without a PCA model") {
    RandomStream gen(5, "noise");
    const auto ds = synth_dataset(SynthKind::WhiteNoise, 8, 64, 1, gen);
    BankConfig cfg;
    cfg.num_features = 25;
    cfg.seed = 42;
    const FeatureBank bank = fit_bank(cfg, ds);

    const auto path = scratch_file("bank.json");
    FileGuard guard{path};
    save_artifact(path.string(), bank);
    const Artifact plain = load_artifact(path.string());
    CHECK_FALSE(plain.pca.has_value());
    CHECK(plain.bank.fingerprint() == bank.fingerprint());
    CHECK(plain.bank.features.size() == 25);
    CHECK(plain.bank.config.seed == 42);
    CHECK(plain.bank.features[3].weights == bank.features[3].weights);
    CHECK(plain.bank.features[3].bias == bank.features[3].bias);

    Matrix data(6, 5);
    RandomStream g2(1, "pca-data");
    for (double& v : data.data()) v = g2.gaussian();
    const PcaModel pca = fit_pca(data);
    save_artifact(path.string(), bank, &pca);
    const Artifact full = load_artifact(path.string());
    REQUIRE(full.pca.has_value());
    CHECK(full.pca->retained == pca.retained);
    CHECK(full.pca->means == pca.means);
    CHECK(full.pca->components == pca.components);

    write_text(path, "{\"format\": \"something-else\"}");
    CHECK_THROWS(load_artifact(path.string()));
}

TEST_CASE("feature CSV dump has one row per series") {
    Matrix features(2, 3);
    features(0, 0) = 0.25;
    features(1, 2) = 0.75;
    const auto path = scratch_file("features.csv");
    FileGuard guard{path};
    write_feature_csv(features, path.string());
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 2);
}

TEST_CASE("string-to-enum helpers") {
    CHECK(format_from_string("csv") == OutputFormat::Csv);
    CHECK(format_from_string("json") == OutputFormat::Json);
    CHECK(format_from_string("markdown") == OutputFormat::Markdown);
    CHECK_THROWS_AS(format_from_string("xml"), std::invalid_argument);
    CHECK(merge_policy_from_string("merge") == MergePolicy::Merge);
    CHECK(merge_policy_from_string("train-only") == MergePolicy::TrainOnly);
    CHECK(merge_policy_from_string("test-only") == MergePolicy::TestOnly);
    CHECK_THROWS_AS(merge_policy_from_string("bogus"), std::invalid_argument);
}
