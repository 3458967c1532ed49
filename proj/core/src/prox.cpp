#include "nestgil/prox.hpp"

#include <cmath>

namespace nestgil {

std::array<double, 4> ProxWeights::normalized() const {
    double sum = beta[0] + beta[1] + beta[2] + beta[3];
    if (sum == 0.0) throw config_error("ProxWeights: sum of beta is zero, normalization undefined");
    return {beta[0] / sum, beta[1] / sum, beta[2] / sum, beta[3] / sum};
}

namespace {
void check_input(double z, double tau) {
    if (!std::isfinite(z)) throw data_error("prox: non-finite input");
    if (tau < 0.0) throw config_error("prox: tau must be nonnegative");
}
}  // namespace

double prox_l0(double z, double tau) {
    check_input(z, tau);
    if (tau == 0.0) return z;
    // ties at |z| = sqrt(2 tau) keep z
    return std::abs(z) >= std::sqrt(2.0 * tau) ? z : 0.0;
}

double prox_l1(double z, double tau) {
    check_input(z, tau);
    double m = std::abs(z) - tau;
    return m > 0.0 ? std::copysign(m, z) : 0.0;
}

double prox_l32(double z, double tau) {
    check_input(z, tau);
    if (tau == 0.0 || z == 0.0) return z;
    double s = z >= 0.0 ? 1.0 : -1.0;
    return z + 1.125 * tau * tau * s * (1.0 - std::sqrt(1.0 + 16.0 * std::abs(z) / (9.0 * tau * tau)));
}

double prox_l2(double z, double tau) {
    check_input(z, tau);
    return z / (1.0 + 2.0 * tau);
}

double theta(double z, double tau, const ProxWeights& w) {
    auto eta = w.normalized();
    return eta[0] * prox_l0(z, tau) + eta[1] * prox_l1(z, tau) + eta[2] * prox_l32(z, tau) +
           eta[3] * prox_l2(z, tau);
}

Eigen::VectorXd theta(const Eigen::VectorXd& z, double tau, const ProxWeights& w) {
    auto eta = w.normalized();
    Eigen::VectorXd out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        double zi = z[i];
        out[i] = eta[0] * prox_l0(zi, tau) + eta[1] * prox_l1(zi, tau) +
                 eta[2] * prox_l32(zi, tau) + eta[3] * prox_l2(zi, tau);
    }
    return out;
}

}  // namespace nestgil
