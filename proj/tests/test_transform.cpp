#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rclust/dataio.hpp"
#include "rclust/transform.hpp"

using namespace rclust;

TEST_CASE("all-zero series convolves to all zeros") {
    std::vector<double> series(32, 0.0);
    std::vector<double> w{2, -1, -1, 2, -1, -1, 2, -1, -1};
    for (double v : dilated_convolve(series, w, 2)) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("constant series under a sum-zero kernel vanishes in the interior") {
    std::vector<double> series(20, 3.5);
    std::vector<double> w{2, -1, -1, 2, -1, -1, 2, -1, -1};  // sums to 0
    const auto out = dilated_convolve(series, w, 1);
    for (std::size_t t = 4; t + 4 < out.size(); ++t) {
        CHECK(out[t] == doctest::Approx(0.0).epsilon(1e-12));
    }
    // Boundary entries see the zero padding instead.
    CHECK(out[0] != 0.0);
}

TEST_CASE("hand-computed convolution fixture") {
    const std::vector<double> series{1, 2, 3, 4, 5};
    const std::vector<double> w{1, 0, -1};
    const auto out = dilated_convolve(series, w, 1);
    const std::vector<double> expected{2, 2, 2, 2, -4};
    REQUIRE(out.size() == expected.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i] == doctest::Approx(expected[i]));
    }
}

TEST_CASE("convolution rejects series shorter than the receptive field") {
    std::vector<double> series(8, 1.0);
    std::vector<double> w(9, 1.0);
    CHECK_THROWS_AS(dilated_convolve(series, w, 1), std::invalid_argument);
    std::vector<double> w3(3, 1.0);
    CHECK_THROWS_AS(dilated_convolve(series, w3, 4), std::invalid_argument);
    CHECK_NOTHROW(dilated_convolve(series, w3, 3));
}

TEST_CASE("optimized convolution matches the naive oracle on random cases") {
    RandomStream gen(0, "conv-cases");
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = 8 + gen.choice(25);           // up to 32
        const std::size_t len = 3 + 2 * gen.choice(3);      // 3, 5, 7
        const std::size_t dmax = std::min<std::size_t>(3, (n - 1) / (len - 1));
        const std::size_t d = 1 + gen.choice(dmax);
        std::vector<double> series(n), w(len);
        for (double& v : series) v = gen.gaussian();
        for (double& v : w) v = gen.choice(3) == 0 ? 2.0 : -1.0;
        const auto fast = dilated_convolve(series, w, d);
        const auto slow = oracles::naive_dilated_convolve(series, w, d);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("ppv fixtures and bounds") {
    const std::vector<double> below{-3, -2, -1};
    const std::vector<double> above{1, 2, 3};
    const std::vector<double> mixed{-1, 0, 1, 2};
    const std::vector<double> ties{1.0, 1.0};
    const std::vector<double> empty;
    CHECK(ppv(below, 0.0) == 0.0);
    CHECK(ppv(above, 0.0) == 1.0);
    CHECK(ppv(mixed, 0.0) == 0.5);
    // Strict inequality: a value equal to the bias is not positive.
    CHECK(ppv(ties, 1.0) == 0.0);
    CHECK_THROWS_AS(ppv(empty, 0.0), std::invalid_argument);
}

TEST_CASE("ppv is non-increasing in the bias") {
    RandomStream gen(1, "ppv");
    std::vector<double> v(50);
    for (double& x : v) x = gen.gaussian();
    double prev = ppv(v, -1e18);
    CHECK(prev == 1.0);
    for (double b = -3.0; b <= 3.0; b += 0.05) {
        const double p = ppv(v, b);
        CHECK(p <= prev);
        prev = p;
    }
    CHECK(ppv(v, 1e18) == 0.0);
}

TEST_CASE("interior convolution outputs shift with the series") {
    RandomStream gen(2, "shift");
    const std::size_t n = 64;
    std::vector<double> series(n);
    for (double& v : series) v = gen.gaussian();
    std::vector<double> w{2, -1, -1, 2, -1, -1, 2, -1, -1};
    const std::size_t d = 2;
    const std::size_t pad = 4 * d;
    const std::size_t shift = 5;
    std::vector<double> shifted(n, 0.0);
    for (std::size_t t = shift; t < n; ++t) shifted[t] = series[t - shift];
    const auto a = dilated_convolve(series, w, d);
    const auto b = dilated_convolve(shifted, w, d);
    for (std::size_t t = pad; t + pad + shift < n; ++t) {
        CHECK(b[t + shift] == doctest::Approx(a[t]).epsilon(1e-12));
    }
}

TEST_CASE("transform_dataset shape, range, determinism and thread invariance") {
    RandomStream gen(3, "noise");
    const auto ds = synth_dataset(SynthKind::WhiteNoise, 12, 128, 1, gen);
    BankConfig cfg;
    cfg.num_features = 100;
    const FeatureBank bank = fit_bank(cfg, ds);

    const FeatureMatrix a = transform_dataset(ds, bank, 1);
    CHECK(a.values.rows() == 12);
    CHECK(a.values.cols() == 100);
    CHECK(a.bank_fingerprint == bank.fingerprint());
    for (double v : a.values.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    const FeatureMatrix b = transform_dataset(ds, bank, 1);
    CHECK(a.values == b.values);
    const FeatureMatrix c = transform_dataset(ds, bank, 4);
    CHECK(a.values == c.values);
}

TEST_CASE("single series gives a 1 x F matrix") {
    RandomStream gen(4, "noise");
    auto ds = synth_dataset(SynthKind::WhiteNoise, 3, 64, 1, gen);
    BankConfig cfg;
    cfg.num_features = 500;
    const FeatureBank bank = fit_bank(cfg, ds);
    TimeSeriesDataset one;
    one.values = Matrix(1, 64);
    for (std::size_t t = 0; t < 64; ++t) one.values(0, t) = ds.values(0, t);
    const FeatureMatrix fm = transform_dataset(one, bank, 1);
    CHECK(fm.values.rows() == 1);
    CHECK(fm.values.cols() == 500);
}

TEST_CASE("length mismatch with the fitted bank is a shape error") {
    RandomStream gen(5, "noise");
    const auto ds = synth_dataset(SynthKind::WhiteNoise, 4, 128, 1, gen);
    BankConfig cfg;
    cfg.num_features = 10;
    const FeatureBank bank = fit_bank(cfg, ds);
    RandomStream gen2(5, "noise2");
    const auto other = synth_dataset(SynthKind::WhiteNoise, 4, 64, 1, gen2);
    CHECK_THROWS_AS(transform_dataset(other, bank, 1), std::invalid_argument);
}
