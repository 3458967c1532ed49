#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "nestgil/errors.hpp"
#include "nestgil/image.hpp"

namespace nestgil {

// Linear map Phi: R^N -> R^M with exact adjoint (the transpose).
class MeasurementOperator {
public:
    static MeasurementOperator dense(Eigen::MatrixXd mat);
    static MeasurementOperator sparse(Eigen::SparseMatrix<double> mat);

    Eigen::Index rows() const { return m_rows_; }
    Eigen::Index cols() const { return n_cols_; }
    bool is_sparse() const { return sparse_storage_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::VectorXd adjoint(const Eigen::VectorXd& w) const;

    const Eigen::MatrixXd& dense_matrix() const;
    const Eigen::SparseMatrix<double>& sparse_matrix() const;

    // Largest eigenvalue of Phi^T Phi by power iteration (seeded, deterministic).
    double normal_operator_norm(int iters = 100, uint64_t seed = 7) const;

private:
    MeasurementOperator() = default;
    Eigen::Index m_rows_ = 0, n_cols_ = 0;
    bool sparse_storage_ = false;
    Eigen::MatrixXd dense_;
    Eigen::SparseMatrix<double> sparse_;
};

// Rows drawn i.i.d. standard normal from the seeded generator, then
// row-orthonormalized so Phi Phi^T = I_M. Deterministic for a fixed seed.
MeasurementOperator gaussian_orthonormal(int m, int n, uint64_t seed);

// Parallel-beam Radon matrix via Siddon ray tracing. Entry (ray, pixel) is the
// intersection length of the ray with the unit pixel square. Angles are
// k*pi/n_views; detector spacing is one pixel side, array centered on the
// image center.
MeasurementOperator radon_parallel(int image_side, int n_views, int n_detectors);

// d-channel feature image, channel-major storage.
struct FeatureStack {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    FeatureStack() = default;
    FeatureStack(int c, int h, int w)
        : channels(c), height(h), width(w), data(static_cast<size_t>(c) * h * w, 0.0) {}

    double& at(int c, int i, int j) {
        return data[(static_cast<size_t>(c) * height + i) * width + j];
    }
    double at(int c, int i, int j) const {
        return data[(static_cast<size_t>(c) * height + i) * width + j];
    }
};

// Linear feature extractor K with exact adjoint K' (explicit stencil
// transpose) and an upper bound on ||K'K||_2.
struct FeatureExtractor {
    int channels = 0;
    double spectral_bound = 0.0;
    std::function<FeatureStack(const Image&)> apply;
    std::function<Image(const FeatureStack&)> adjoint;
};

// Forward differences, zero in the last column/row; adjoint is the negative
// divergence with matching boundary. ||K'K|| <= 8.
FeatureExtractor gradient_extractor();

// 5-point stencil [0 1 0; 1 -4 1; 0 1 0] with replicate boundary; adjoint is
// the explicit transpose of the assembled action. ||K'K|| <= 64.
FeatureExtractor laplacian_extractor();

// Largest eigenvalue of K'K on a height x width grid by power iteration.
double extractor_normal_norm(const FeatureExtractor& K, int height, int width, int iters = 200,
                             uint64_t seed = 11);

}  // namespace nestgil
