#include "rclust/kernelbank.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "rclust/transform.hpp"

namespace rclust {
namespace {

void hash_u64(std::uint64_t& h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

void hash_double(std::uint64_t& h, double v) {
    hash_u64(h, std::bit_cast<std::uint64_t>(v));
}

}  // namespace

std::uint64_t FeatureBank::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    hash_u64(h, config.num_features);
    hash_u64(h, config.kernel_length);
    hash_u64(h, static_cast<std::uint64_t>(config.weight_mode));
    hash_u64(h, static_cast<std::uint64_t>(config.bias_mode));
    hash_u64(h, config.seed);
    hash_u64(h, fitted_input_length);
    for (const auto& f : features) {
        for (double w : f.weights) hash_double(h, w);
        hash_u64(h, f.dilation);
        hash_double(h, f.bias);
        hash_double(h, f.quantile_level);
    }
    return h;
}

void validate(const BankConfig& config) {
    if (config.num_features < 1) {
        throw std::invalid_argument("BankConfig: num_features must be >= 1");
    }
    if (config.kernel_length < 3 || config.kernel_length % 2 == 0) {
        throw std::invalid_argument("BankConfig: kernel_length must be odd and >= 3");
    }
}

std::size_t max_dilation(std::size_t input_length, std::size_t kernel_length) {
    if (input_length <= kernel_length) {
        throw std::invalid_argument(
            "max_dilation: series length " + std::to_string(input_length) +
            " too short for kernel length " + std::to_string(kernel_length));
    }
    return (input_length - 1) / (kernel_length - 1);
}

std::vector<double> sample_weights(RandomStream& stream, const BankConfig& config) {
    const std::size_t len = config.kernel_length;
    std::vector<double> w(len, -1.0);
    if (config.weight_mode == WeightMode::SumZero) {
        // Uniform k-subset of positions via partial Fisher-Yates.
        const std::size_t npos = len / 3;
        std::vector<std::size_t> idx(len);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < npos; ++i) {
            std::size_t j = i + static_cast<std::size_t>(stream.choice(len - i));
            std::swap(idx[i], idx[j]);
            w[idx[i]] = 2.0;
        }
    } else {
        for (std::size_t i = 0; i < len; ++i) {
            if (stream.choice(3) == 0) w[i] = 2.0;
        }
    }
    return w;
}

std::size_t sample_dilation(RandomStream& stream, std::size_t input_length,
                            std::size_t kernel_length) {
    const std::size_t max_d = max_dilation(input_length, kernel_length);
    if (max_d <= 1) return 1;
    const double x_max = std::log2(static_cast<double>(input_length - 1) /
                                   static_cast<double>(kernel_length - 1));
    const double x = stream.next_real() * x_max;
    auto d = static_cast<std::size_t>(std::exp2(x));
    return std::clamp<std::size_t>(d, 1, max_d);
}

double empirical_quantile(std::vector<double> sample, double level) {
    if (sample.empty()) {
        throw std::invalid_argument("empirical_quantile: empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const std::size_t m = sample.size();
    if (m == 1) return sample[0];
    const double h = level * static_cast<double>(m - 1);
    const auto lo = std::min<std::size_t>(static_cast<std::size_t>(h), m - 2);
    const double frac = h - static_cast<double>(lo);
    return sample[lo] + frac * (sample[lo + 1] - sample[lo]);
}

FeatureBank fit_bank(const BankConfig& config, const TimeSeriesDataset& dataset) {
    validate(config);
    if (dataset.size() == 0) {
        throw std::invalid_argument("fit_bank: dataset is empty");
    }
    const std::size_t length = dataset.length();
    max_dilation(length, config.kernel_length);  // throws if too short

    const std::size_t nfeat = config.num_features;

    RandomStream weight_stream(config.seed, "weights");
    RandomStream dilation_stream(config.seed, "dilations");
    RandomStream series_stream(config.seed, "bias-series");

    // Quantile levels (j+1)/(F+1), assigned to features either in index
    // order (legacy) or under a random permutation (the fix).
    std::vector<std::size_t> level_of(nfeat);
    std::iota(level_of.begin(), level_of.end(), 0);
    if (config.bias_mode == BiasMode::PermutedQuantiles) {
        RandomStream perm_stream(config.seed, "bias-perm");
        perm_stream.shuffle(level_of);
    }

    FeatureBank bank;
    bank.config = config;
    bank.fitted_input_length = length;
    bank.features.resize(nfeat);

    for (std::size_t i = 0; i < nfeat; ++i) {
        KernelFeature& f = bank.features[i];
        RandomStream ws = weight_stream.substream(i);
        RandomStream ds = dilation_stream.substream(i);
        RandomStream ss = series_stream.substream(i);
        f.weights = sample_weights(ws, config);
        f.dilation = sample_dilation(ds, length, config.kernel_length);
        const auto ref = static_cast<std::size_t>(ss.choice(dataset.size()));
        auto conv = dilated_convolve(dataset.values.row(ref), f.weights, f.dilation);
        f.quantile_level = static_cast<double>(level_of[i] + 1) /
                           static_cast<double>(nfeat + 1);
        f.bias = empirical_quantile(std::move(conv), f.quantile_level);
    }
    return bank;
}

std::string to_string(WeightMode mode) {
    return mode == WeightMode::SumZero ? "sum-zero" : "iid";
}

std::string to_string(BiasMode mode) {
    return mode == BiasMode::PermutedQuantiles ? "permuted-quantiles" : "legacy-sorted";
}

WeightMode weight_mode_from_string(const std::string& s) {
    if (s == "sum-zero") return WeightMode::SumZero;
    if (s == "iid") return WeightMode::Iid;
    throw std::invalid_argument("unknown weight mode: " + s);
}

BiasMode bias_mode_from_string(const std::string& s) {
    if (s == "permuted-quantiles") return BiasMode::PermutedQuantiles;
    if (s == "legacy-sorted") return BiasMode::LegacySorted;
    throw std::invalid_argument("unknown bias mode: " + s);
}

}  // namespace rclust
