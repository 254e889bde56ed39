#ifndef RCLUST_TRANSFORM_HPP
#define RCLUST_TRANSFORM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rclust/dataset.hpp"
#include "rclust/kernelbank.hpp"
#include "rclust/matrix.hpp"

namespace rclust {

// PPV feature matrix: one row per series, one column per kernel feature,
// every entry in [0, 1].
struct FeatureMatrix {
    Matrix values;
    std::uint64_t bank_fingerprint = 0;
};

// Dilated 1-D convolution with symmetric zero "same" padding of
// (len-1)/2 * dilation on each side; output has the input's length.
// The kernel is applied flipped, i.e. out[t] = sum_j w[j] * x[t + pad - j*d].
// Throws std::invalid_argument if the receptive field exceeds the series.
std::vector<double> dilated_convolve(std::span<const double> series,
                                     std::span<const double> weights,
                                     std::size_t dilation);

// Proportion of strictly positive values of (conv_output - bias).
// Throws std::invalid_argument on an empty input.
double ppv(std::span<const double> conv_output, double bias);

// Apply every feature of the bank to every series. Parallel across series;
// bit-identical to the sequential result for any thread count.
FeatureMatrix transform_dataset(const TimeSeriesDataset& dataset, const FeatureBank& bank,
                                int threads = 1);

}  // namespace rclust

#endif
