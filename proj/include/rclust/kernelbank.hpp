#ifndef RCLUST_KERNELBANK_HPP
#define RCLUST_KERNELBANK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rclust/dataset.hpp"
#include "rclust/randkit.hpp"

namespace rclust {

// How the {-1, 2} weights are drawn.
//   SumZero: exactly floor(len/3) positions get 2 (sum is zero at length 9).
//   Iid:     each position independently 2 with probability 1/3.
enum class WeightMode { SumZero, Iid };

// How quantile levels are assigned to features when drawing biases.
//   PermutedQuantiles: levels randomly permuted across features (the fix).
//   LegacySorted:      levels in feature-index order, which imprints an
//                      artificial trend along the feature axis.
enum class BiasMode { PermutedQuantiles, LegacySorted };

struct BankConfig {
    std::size_t num_features = 500;
    std::size_t kernel_length = 9;
    WeightMode weight_mode = WeightMode::SumZero;
    BiasMode bias_mode = BiasMode::PermutedQuantiles;
    std::uint64_t seed = 0;
};

// One random convolutional feature: fixed weights, dilation and bias.
struct KernelFeature {
    std::vector<double> weights;  // entries are exactly -1 or 2
    std::size_t dilation = 1;
    double bias = 0.0;
    double quantile_level = 0.0;  // level the bias was drawn at, in (0,1)
};

struct FeatureBank {
    BankConfig config;
    std::vector<KernelFeature> features;
    std::size_t fitted_input_length = 0;

    // Content hash used to tie a FeatureMatrix back to the bank that made it.
    std::uint64_t fingerprint() const;
};

// Throws std::invalid_argument on num_features < 1 or even/short kernel_length.
void validate(const BankConfig& config);

// Largest dilation whose receptive field still fits the series:
// floor((input_length - 1) / (kernel_length - 1)).
// Throws std::invalid_argument if input_length <= kernel_length.
std::size_t max_dilation(std::size_t input_length, std::size_t kernel_length);

std::vector<double> sample_weights(RandomStream& stream, const BankConfig& config);

// Dilation d = floor(2^x), x uniform on [0, log2((L-1)/(len-1))].
std::size_t sample_dilation(RandomStream& stream, std::size_t input_length,
                            std::size_t kernel_length);

// Fit the bank against a dataset: per feature, sample weights and dilation,
// convolve a randomly chosen series, and take the bias as an empirical
// quantile of that output. Quantile levels are the evenly spaced grid
// (j+1)/(F+1), assigned per bias_mode. Deterministic in (config, dataset).
FeatureBank fit_bank(const BankConfig& config, const TimeSeriesDataset& dataset);

// Linear-interpolation empirical quantile of an unsorted sample.
double empirical_quantile(std::vector<double> sample, double level);

std::string to_string(WeightMode mode);
std::string to_string(BiasMode mode);
WeightMode weight_mode_from_string(const std::string& s);
BiasMode bias_mode_from_string(const std::string& s);

}  // namespace rclust

#endif
