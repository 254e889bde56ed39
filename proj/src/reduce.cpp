#include "rclust/reduce.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace rclust {

std::size_t select_dims(const std::vector<double>& ratios, double threshold) {
    std::size_t r = 0;
    for (double v : ratios) {
        if (v >= threshold) {
            ++r;
        } else {
            break;  // ratios are descending
        }
    }
    return r > 0 ? r : 1;
}

PcaModel fit_pca(const Matrix& features, double threshold) {
    const std::size_t n = features.rows();
    const std::size_t f = features.cols();
    if (n < 2) {
        throw std::invalid_argument("fit_pca: need at least 2 rows");
    }

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        x(features.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));

    Eigen::MatrixXd centered = x;
    Eigen::RowVectorXd means = centered.colwise().mean();
    centered.rowwise() -= means;

    const double total_variance = centered.squaredNorm() / static_cast<double>(n - 1);
    if (!(total_variance > 0.0)) {
        throw std::domain_error("fit_pca: data has zero total variance");
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::MatrixXd& v = svd.matrixV();  // f x n_components
    const auto ncomp = static_cast<std::size_t>(sv.size());

    PcaModel model;
    model.means.assign(means.data(), means.data() + f);
    model.components = Matrix(ncomp, f);
    model.explained_variance.resize(ncomp);
    model.explained_variance_ratio.resize(ncomp);

    for (std::size_t c = 0; c < ncomp; ++c) {
        const double var = sv(static_cast<Eigen::Index>(c)) * sv(static_cast<Eigen::Index>(c)) /
                           static_cast<double>(n - 1);
        model.explained_variance[c] = var;
        model.explained_variance_ratio[c] = var / total_variance;

        // Deterministic sign: make the largest-magnitude loading positive.
        Eigen::Index peak = 0;
        v.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff(&peak);
        const double sign = v(peak, static_cast<Eigen::Index>(c)) < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < f; ++j) {
            model.components(c, j) = sign * v(static_cast<Eigen::Index>(j),
                                              static_cast<Eigen::Index>(c));
        }
    }

    model.retained = select_dims(model.explained_variance_ratio, threshold);
    if (model.retained > ncomp) model.retained = ncomp;
    return model;
}

Matrix project(const Matrix& features, const PcaModel& model, std::size_t dims) {
    const std::size_t f = features.cols();
    if (f != model.means.size() || f != model.components.cols()) {
        throw std::invalid_argument("project: feature count does not match model");
    }
    if (dims > model.components.rows()) {
        throw std::invalid_argument("project: more dimensions requested than computed");
    }
    const std::size_t n = features.rows();
    Matrix out(n, dims);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < dims; ++c) {
            double acc = 0.0;
            for (std::size_t j = 0; j < f; ++j) {
                acc += (features(i, j) - model.means[j]) * model.components(c, j);
            }
            out(i, c) = acc;
        }
    }
    return out;
}

Matrix reconstruct(const Matrix& embedding, const PcaModel& model) {
    const std::size_t n = embedding.rows();
    const std::size_t dims = embedding.cols();
    const std::size_t f = model.components.cols();
    if (dims > model.components.rows()) {
        throw std::invalid_argument("reconstruct: embedding wider than model");
    }
    Matrix out(n, f);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            double acc = model.means[j];
            for (std::size_t c = 0; c < dims; ++c) {
                acc += embedding(i, c) * model.components(c, j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

}  // namespace rclust
