#include "nestgil/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nestgil {

MeasurementOperator MeasurementOperator::dense(Eigen::MatrixXd mat) {
    MeasurementOperator op;
    op.m_rows_ = mat.rows();
    op.n_cols_ = mat.cols();
    op.dense_ = std::move(mat);
    return op;
}

MeasurementOperator MeasurementOperator::sparse(Eigen::SparseMatrix<double> mat) {
    MeasurementOperator op;
    op.m_rows_ = mat.rows();
    op.n_cols_ = mat.cols();
    op.sparse_storage_ = true;
    op.sparse_ = std::move(mat);
    op.sparse_.makeCompressed();
    return op;
}

Eigen::VectorXd MeasurementOperator::apply(const Eigen::VectorXd& v) const {
    if (v.size() != n_cols_) throw data_error("operator apply: dimension mismatch");
    return sparse_storage_ ? Eigen::VectorXd(sparse_ * v) : Eigen::VectorXd(dense_ * v);
}

Eigen::VectorXd MeasurementOperator::adjoint(const Eigen::VectorXd& w) const {
    if (w.size() != m_rows_) throw data_error("operator adjoint: dimension mismatch");
    return sparse_storage_ ? Eigen::VectorXd(sparse_.transpose() * w)
                           : Eigen::VectorXd(dense_.transpose() * w);
}

const Eigen::MatrixXd& MeasurementOperator::dense_matrix() const {
    if (sparse_storage_) throw data_error("operator is sparse");
    return dense_;
}

const Eigen::SparseMatrix<double>& MeasurementOperator::sparse_matrix() const {
    if (!sparse_storage_) throw data_error("operator is dense");
    return sparse_;
}

double MeasurementOperator::normal_operator_norm(int iters, uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(n_cols_);
    for (Eigen::Index i = 0; i < n_cols_; ++i) v[i] = gauss(rng);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd w = adjoint(apply(v));
        lambda = v.dot(w);
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
    }
    return lambda;
}

MeasurementOperator gaussian_orthonormal(int m, int n, uint64_t seed) {
    if (m <= 0 || n <= 0) throw config_error("gaussian_orthonormal: dimensions must be positive");
    if (m > n) throw config_error("gaussian_orthonormal: m > n, rows cannot be orthonormal");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    // QR of G^T gives orthonormal columns spanning the row space of G.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.transpose());
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    return MeasurementOperator::dense(q.transpose());
}

namespace {

struct Ray {
    double px, py;  // a point on the ray
    double dx, dy;  // unit direction
};

// Accumulates Siddon intersection lengths of one ray with the S x S pixel grid.
void trace_ray(const Ray& r, int side, int row_index,
               std::vector<Eigen::Triplet<double>>& triplets) {
    const double eps = 1e-12;
    double s_enter = -1e300, s_exit = 1e300;
    const double lo = 0.0, hi = static_cast<double>(side);

    auto clip_axis = [&](double p0, double d) {
        if (std::abs(d) < eps) {
            if (p0 < lo || p0 > hi) s_enter = 1e300;  // parallel ray outside the slab
            return;
        }
        double s1 = (lo - p0) / d, s2 = (hi - p0) / d;
        if (s1 > s2) std::swap(s1, s2);
        s_enter = std::max(s_enter, s1);
        s_exit = std::min(s_exit, s2);
    };
    clip_axis(r.px, r.dx);
    clip_axis(r.py, r.dy);
    if (s_exit - s_enter <= eps) return;

    std::vector<double> breaks;
    breaks.push_back(s_enter);
    auto add_crossings = [&](double p0, double d) {
        if (std::abs(d) < eps) return;
        for (int k = 0; k <= side; ++k) {
            double s = (static_cast<double>(k) - p0) / d;
            if (s > s_enter + eps && s < s_exit - eps) breaks.push_back(s);
        }
    };
    add_crossings(r.px, r.dx);
    add_crossings(r.py, r.dy);
    breaks.push_back(s_exit);
    std::sort(breaks.begin(), breaks.end());

    for (size_t b = 0; b + 1 < breaks.size(); ++b) {
        double len = breaks[b + 1] - breaks[b];
        if (len <= eps) continue;
        double smid = 0.5 * (breaks[b] + breaks[b + 1]);
        int j = std::clamp(static_cast<int>(std::floor(r.px + smid * r.dx)), 0, side - 1);
        int i = std::clamp(static_cast<int>(std::floor(r.py + smid * r.dy)), 0, side - 1);
        triplets.emplace_back(row_index, i * side + j, len);
    }
}

}  // namespace

MeasurementOperator radon_parallel(int image_side, int n_views, int n_detectors) {
    if (image_side <= 0 || n_views < 1 || n_detectors < 1)
        throw config_error("radon_parallel: invalid geometry");
    if (image_side > 64)
        throw config_error("radon_parallel: image_side > 64 not supported by sparse storage");

    const double c = image_side / 2.0;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(n_views) * n_detectors * image_side * 2);
    for (int a = 0; a < n_views; ++a) {
        const double theta = a * M_PI / n_views;
        const double ct = std::cos(theta), st = std::sin(theta);
        for (int d = 0; d < n_detectors; ++d) {
            const double t = d - (n_detectors - 1) / 2.0;
            Ray ray{c + t * ct, c + t * st, -st, ct};
            trace_ray(ray, image_side, a * n_detectors + d, triplets);
        }
    }
    Eigen::SparseMatrix<double> mat(static_cast<Eigen::Index>(n_views) * n_detectors,
                                    static_cast<Eigen::Index>(image_side) * image_side);
    mat.setFromTriplets(triplets.begin(), triplets.end());
    return MeasurementOperator::sparse(std::move(mat));
}

FeatureExtractor gradient_extractor() {
    FeatureExtractor K;
    K.channels = 2;
    K.spectral_bound = 8.0;
    K.apply = [](const Image& img) {
        FeatureStack fs(2, img.height, img.width);
        for (int i = 0; i < img.height; ++i)
            for (int j = 0; j < img.width; ++j) {
                if (j + 1 < img.width) fs.at(0, i, j) = img.at(i, j + 1) - img.at(i, j);
                if (i + 1 < img.height) fs.at(1, i, j) = img.at(i + 1, j) - img.at(i, j);
            }
        return fs;
    };
    K.adjoint = [](const FeatureStack& fs) {
        if (fs.channels != 2) throw data_error("gradient adjoint: expected 2 channels");
        Image out(fs.height, fs.width);
        for (int i = 0; i < fs.height; ++i)
            for (int j = 0; j < fs.width; ++j) {
                if (j + 1 < fs.width) {
                    out.at(i, j + 1) += fs.at(0, i, j);
                    out.at(i, j) -= fs.at(0, i, j);
                }
                if (i + 1 < fs.height) {
                    out.at(i + 1, j) += fs.at(1, i, j);
                    out.at(i, j) -= fs.at(1, i, j);
                }
            }
        return out;
    };
    return K;
}

FeatureExtractor laplacian_extractor() {
    FeatureExtractor K;
    K.channels = 1;
    K.spectral_bound = 64.0;
    auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };
    K.apply = [clampi](const Image& img) {
        FeatureStack fs(1, img.height, img.width);
        for (int i = 0; i < img.height; ++i)
            for (int j = 0; j < img.width; ++j) {
                double nb = img.at(clampi(i - 1, img.height - 1), j) +
                            img.at(clampi(i + 1, img.height - 1), j) +
                            img.at(i, clampi(j - 1, img.width - 1)) +
                            img.at(i, clampi(j + 1, img.width - 1));
                fs.at(0, i, j) = nb - 4.0 * img.at(i, j);
            }
        return fs;
    };
    K.adjoint = [clampi](const FeatureStack& fs) {
        if (fs.channels != 1) throw data_error("laplacian adjoint: expected 1 channel");
        Image out(fs.height, fs.width);
        for (int i = 0; i < fs.height; ++i)
            for (int j = 0; j < fs.width; ++j) {
                double w = fs.at(0, i, j);
                out.at(clampi(i - 1, fs.height - 1), j) += w;
                out.at(clampi(i + 1, fs.height - 1), j) += w;
                out.at(i, clampi(j - 1, fs.width - 1)) += w;
                out.at(i, clampi(j + 1, fs.width - 1)) += w;
                out.at(i, j) -= 4.0 * w;
            }
        return out;
    };
    return K;
}

double extractor_normal_norm(const FeatureExtractor& K, int height, int width, int iters,
                             uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Image v(height, width);
    for (double& x : v.values) x = gauss(rng);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Image w = K.adjoint(K.apply(v));
        double vw = 0.0, nw = 0.0;
        for (int p = 0; p < v.pixels(); ++p) {
            vw += v.values[p] * w.values[p];
            nw += w.values[p] * w.values[p];
        }
        double vn = 0.0;
        for (double x : v.values) vn += x * x;
        lambda = vw / vn;
        nw = std::sqrt(nw);
        if (nw == 0.0) return 0.0;
        for (int p = 0; p < v.pixels(); ++p) v.values[p] = w.values[p] / nw;
    }
    return lambda;
}

}  // namespace nestgil
