#include <doctest.h>

#include <random>

#include "nestgil/operators.hpp"
#include "nestgil/phantom.hpp"
#include "oracles.hpp"

using namespace nestgil;

namespace {

Eigen::VectorXd random_vec(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

void check_adjoint(const MeasurementOperator& op, int trials, std::mt19937_64& rng) {
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd v = random_vec(op.cols(), rng);
        Eigen::VectorXd w = random_vec(op.rows(), rng);
        double lhs = op.apply(v).dot(w);
        double rhs = v.dot(op.adjoint(w));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * v.norm() * w.norm());
    }
}

}  // namespace

TEST_CASE("gaussian orthonormal rows") {
    SUBCASE("square case is orthogonal") {
        auto phi = gaussian_orthonormal(4, 4, 123);
        Eigen::MatrixXd g = phi.dense_matrix() * phi.dense_matrix().transpose();
        CHECK((g - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("CS ratio 25% of 33x33 gives 272 rows") {
        auto phi = gaussian_orthonormal(272, 1089, 7);
        CHECK(phi.rows() == 272);
        CHECK(phi.cols() == 1089);
        Eigen::MatrixXd g = phi.dense_matrix() * phi.dense_matrix().transpose();
        CHECK((g - Eigen::MatrixXd::Identity(272, 272)).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("same seed is bit-identical") {
        auto a = gaussian_orthonormal(10, 30, 99);
        auto b = gaussian_orthonormal(10, 30, 99);
        CHECK(a.dense_matrix() == b.dense_matrix());
    }
    SUBCASE("m > n is a rank error") {
        CHECK_THROWS_AS(gaussian_orthonormal(5, 4, 1), config_error);
    }
    SUBCASE("adjoint consistency and contraction of the adjoint") {
        std::mt19937_64 rng(3);
        auto phi = gaussian_orthonormal(20, 50, 17);
        check_adjoint(phi, 100, rng);
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXd y = random_vec(20, rng);
            CHECK(phi.adjoint(y).norm() <= y.norm() * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("radon parallel beam") {
    SUBCASE("1x1 image, single centered ray") {
        auto phi = radon_parallel(1, 1, 1);
        Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
        Eigen::VectorXd s = phi.apply(x);
        REQUIRE(s.size() == 1);
        CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("disk phantom projections at 0 and 90 degrees match") {
        const int side = 16, ndet = 23;
        auto phi = radon_parallel(side, 2, ndet);  // views at 0 and pi/2
        Image disk = disk_phantom(side, 0.35);
        Eigen::VectorXd sino = phi.apply(vectorize(disk));
        for (int d = 0; d < ndet; ++d)
            CHECK(sino[d] == doctest::Approx(sino[ndet + d]).epsilon(1e-10));
    }
    SUBCASE("adjoint is the exact transpose") {
        std::mt19937_64 rng(5);
        auto phi = radon_parallel(16, 60, 23);
        check_adjoint(phi, 100, rng);
    }
    SUBCASE("coefficients nonnegative, row sums equal chord lengths") {
        const int side = 16, views = 7, ndet = 23;
        auto phi = radon_parallel(side, views, ndet);
        const auto& mat = phi.sparse_matrix();
        for (int k = 0; k < mat.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(mat, k); it; ++it)
                CHECK(it.value() >= 0.0);
        // chord through the square support, computed from the ray geometry
        Eigen::VectorXd row_sums = phi.apply(Eigen::VectorXd::Ones(side * side));
        for (int a = 0; a < views; ++a) {
            double theta = a * M_PI / views;
            for (int d = 0; d < ndet; ++d) {
                double t = d - (ndet - 1) / 2.0;
                // clip the ray against the square analytically
                double px = side / 2.0 + t * std::cos(theta), py = side / 2.0 + t * std::sin(theta);
                double dx = -std::sin(theta), dy = std::cos(theta);
                double s0 = -1e300, s1 = 1e300;
                bool outside = false;
                auto clip = [&](double p, double dir) {
                    if (std::abs(dir) < 1e-12) {
                        if (p < 0.0 || p > side) outside = true;
                        return;
                    }
                    double a0 = (0.0 - p) / dir, a1 = (side - p) / dir;
                    if (a0 > a1) std::swap(a0, a1);
                    s0 = std::max(s0, a0);
                    s1 = std::min(s1, a1);
                };
                clip(px, dx);
                clip(py, dy);
                double chord = (outside || s1 <= s0) ? 0.0 : s1 - s0;
                CHECK(std::abs(row_sums[a * ndet + d] - chord) <= 1e-9);
            }
        }
        // column sums bounded by the image diagonal
        Eigen::VectorXd col_sums = phi.adjoint(Eigen::VectorXd::Ones(views * ndet));
        // each view contributes at most one traversal of length <= diagonal... per view
        CHECK(col_sums.maxCoeff() <= views * side * std::sqrt(2.0) + 1e-9);
    }
    SUBCASE("oversized image is rejected") {
        CHECK_THROWS_AS(radon_parallel(65, 10, 93), config_error);
    }
}

TEST_CASE("gradient extractor") {
    auto K = gradient_extractor();
    SUBCASE("constant image maps to zero") {
        Image img(9, 9);
        for (double& v : img.values) v = 3.5;
        FeatureStack fs = K.apply(img);
        for (double v : fs.data) CHECK(v == 0.0);
    }
    SUBCASE("ramp image") {
        Image img(5, 6);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 6; ++j) img.at(i, j) = j;
        FeatureStack fs = K.apply(img);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 6; ++j) {
                CHECK(fs.at(0, i, j) == (j < 5 ? 1.0 : 0.0));
                CHECK(fs.at(1, i, j) == 0.0);
            }
    }
    SUBCASE("adjoint consistency") {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            Image v(12, 12);
            for (double& x : v.values) x = gauss(rng);
            FeatureStack w(2, 12, 12);
            for (double& x : w.data) x = gauss(rng);
            FeatureStack kv = K.apply(v);
            Image kw = K.adjoint(w);
            double lhs = 0.0;
            for (size_t i = 0; i < kv.data.size(); ++i) lhs += kv.data[i] * w.data[i];
            double rhs = 0.0;
            for (size_t i = 0; i < v.values.size(); ++i) rhs += v.values[i] * kw.values[i];
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
    SUBCASE("spectral bound dominates power iteration") {
        double lam16 = extractor_normal_norm(K, 16, 16);
        CHECK(lam16 <= 8.0 * 1.0001);
        double lam96 = extractor_normal_norm(K, 96, 96, 600);
        CHECK(lam96 <= 8.0 * 1.0001);
        CHECK(lam96 >= 8.0 * 0.99);  // approaches the classical bound on large grids
    }
}

TEST_CASE("laplacian extractor") {
    auto K = laplacian_extractor();
    SUBCASE("constant image maps to zero") {
        Image img(7, 7);
        for (double& v : img.values) v = -2.0;
        FeatureStack fs = K.apply(img);
        for (double v : fs.data) CHECK(std::abs(v) == 0.0);
    }
    SUBCASE("centered impulse reproduces the stencil") {
        Image img(5, 5);
        img.at(2, 2) = 1.0;
        FeatureStack fs = K.apply(img);
        CHECK(fs.at(0, 2, 2) == -4.0);
        CHECK(fs.at(0, 1, 2) == 1.0);
        CHECK(fs.at(0, 3, 2) == 1.0);
        CHECK(fs.at(0, 2, 1) == 1.0);
        CHECK(fs.at(0, 2, 3) == 1.0);
        CHECK(fs.at(0, 0, 0) == 0.0);
    }
    SUBCASE("adjoint consistency") {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            Image v(12, 12);
            for (double& x : v.values) x = gauss(rng);
            FeatureStack w(1, 12, 12);
            for (double& x : w.data) x = gauss(rng);
            FeatureStack kv = K.apply(v);
            Image kw = K.adjoint(w);
            double lhs = 0.0;
            for (size_t i = 0; i < kv.data.size(); ++i) lhs += kv.data[i] * w.data[i];
            double rhs = 0.0;
            for (size_t i = 0; i < v.values.size(); ++i) rhs += v.values[i] * kw.values[i];
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
    SUBCASE("spectral bound dominates power iteration") {
        CHECK(extractor_normal_norm(K, 16, 16) <= 64.0 * 1.0001);
        CHECK(extractor_normal_norm(K, 48, 48, 400) <= 64.0 * 1.0001);
    }
}
