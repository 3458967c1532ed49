// Test-only reference implementations, independent of the library paths they
// check: brute-force prox minimization, conjugate gradients, dense operator
// assembly, log-log slope fits.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nestgil/image.hpp"
#include "nestgil/operators.hpp"

namespace oracles {

// argmin over a uniform grid of 0.5*(x-z)^2 + tau*penalty(x)
inline double grid_prox(double z, double tau, const std::function<double(double)>& penalty,
                        double lo = -6.0, double hi = 6.0, double step = 1e-4) {
    double best_x = 0.0, best_f = 0.5 * z * z + tau * penalty(0.0);  // exact-zero candidate
    const long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) {
        double x = lo + i * step;
        double f = 0.5 * (x - z) * (x - z) + tau * penalty(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    return best_x;
}

inline double penalty_l0(double x) { return x != 0.0 ? 1.0 : 0.0; }
inline double penalty_l1(double x) { return std::abs(x); }
inline double penalty_l32(double x) { return std::pow(std::abs(x), 1.5); }
inline double penalty_l2(double x) { return x * x; }

// Matrix-free conjugate gradients for s.p.d. A.
inline Eigen::VectorXd conjugate_gradient(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& A, const Eigen::VectorXd& b,
    int max_iters = 2000, double tol = 1e-14) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b;
    Eigen::VectorXd p = r;
    double rs = r.squaredNorm();
    for (int it = 0; it < max_iters && std::sqrt(rs) > tol * b.norm(); ++it) {
        Eigen::VectorXd ap = A(p);
        double alpha = rs / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        double rs_new = r.squaredNorm();
        p = r + (rs_new / rs) * p;
        rs = rs_new;
    }
    return x;
}

// Dense matrix of K'K on a height x width grid, assembled column by column.
inline Eigen::MatrixXd dense_normal_matrix(const nestgil::FeatureExtractor& K, int height,
                                           int width) {
    const int n = height * width;
    Eigen::MatrixXd mat(n, n);
    for (int col = 0; col < n; ++col) {
        nestgil::Image e(height, width);
        e.values[col] = 1.0;
        nestgil::Image out = K.adjoint(K.apply(e));
        for (int row = 0; row < n; ++row) mat(row, col) = out.values[row];
    }
    return mat;
}

inline nestgil::Image random_image(int height, int width, std::mt19937_64& rng,
                                   double data_range = 1.0) {
    std::uniform_real_distribution<double> uni(0.0, data_range);
    nestgil::Image img(height, width, data_range);
    for (double& v : img.values) v = uni(rng);
    return img;
}

// least-squares slope of log10(values[k]) against log10(k) for k in [k_lo, k_hi]
inline double loglog_slope(const std::vector<double>& values, int k_lo, int k_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = k_lo; k <= k_hi && k < static_cast<int>(values.size()); ++k) {
        if (values[k] <= 0.0) continue;  // gap underflowed; stop contributing
        double x = std::log10(static_cast<double>(k));
        double y = std::log10(values[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
