#include "rclust/transform.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "rclust/parallel.hpp"

namespace rclust {

std::vector<double> dilated_convolve(std::span<const double> series,
                                     std::span<const double> weights,
                                     std::size_t dilation) {
    const std::size_t n = series.size();
    const std::size_t len = weights.size();
    if (dilation == 0) {
        throw std::invalid_argument("dilated_convolve: dilation must be >= 1");
    }
    const std::size_t field = (len - 1) * dilation + 1;
    if (n < field) {
        throw std::invalid_argument("dilated_convolve: series of length " +
                                    std::to_string(n) +
                                    " shorter than receptive field " +
                                    std::to_string(field));
    }
    const auto pad = static_cast<std::ptrdiff_t>((len - 1) / 2 * dilation);
    std::vector<double> out(n, 0.0);
    // One strided pass per tap; out[t] += w[j] * x[t + pad - j*d], zeros
    // outside the series. Tap loop outside so the inner loop vectorizes.
    for (std::size_t j = 0; j < len; ++j) {
        const double w = weights[j];
        if (w == 0.0) continue;
        const std::ptrdiff_t off =
            pad - static_cast<std::ptrdiff_t>(j * dilation);
        const std::size_t t0 = off < 0 ? static_cast<std::size_t>(-off) : 0;
        const std::size_t t1 =
            off > 0 ? n - static_cast<std::size_t>(off) : n;
        const double* src = series.data() + off;
        for (std::size_t t = t0; t < t1; ++t) {
            out[t] += w * src[t];
        }
    }
    return out;
}

double ppv(std::span<const double> conv_output, double bias) {
    if (conv_output.empty()) {
        throw std::invalid_argument("ppv: empty convolution output");
    }
    std::size_t positive = 0;
    for (double v : conv_output) {
        if (v - bias > 0.0) ++positive;
    }
    return static_cast<double>(positive) / static_cast<double>(conv_output.size());
}

FeatureMatrix transform_dataset(const TimeSeriesDataset& dataset, const FeatureBank& bank,
                                int threads) {
    if (dataset.length() != bank.fitted_input_length) {
        throw std::invalid_argument(
            "transform_dataset: series length " + std::to_string(dataset.length()) +
            " does not match bank fitted length " +
            std::to_string(bank.fitted_input_length));
    }
    const std::size_t n = dataset.size();
    const std::size_t nfeat = bank.features.size();
    FeatureMatrix fm;
    fm.values = Matrix(n, nfeat);
    fm.bank_fingerprint = bank.fingerprint();

    parallel_for(0, n, threads, [&](std::size_t i) {
        auto series = dataset.values.row(i);
        auto out = fm.values.row(i);
        for (std::size_t f = 0; f < nfeat; ++f) {
            const auto& feat = bank.features[f];
            auto conv = dilated_convolve(series, feat.weights, feat.dilation);
            out[f] = ppv(conv, feat.bias);
        }
    });
    return fm;
}

}  // namespace rclust
