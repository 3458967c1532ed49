#pragma once

#include <array>

#include <Eigen/Dense>

#include "nestgil/errors.hpp"

namespace nestgil {

// Coefficients beta_1..beta_4 for the p = 0, 1, 3/2, 2 prox maps. The applied
// weights are eta_i = beta_i / sum(beta).
struct ProxWeights {
    std::array<double, 4> beta{1.0, 1.0, 1.0, 1.0};

    std::array<double, 4> normalized() const;
};

// Closed-form scalar prox maps for (1/2)(x-z)^2 + tau*|x|^p. tau = 0 returns z.
double prox_l0(double z, double tau);
double prox_l1(double z, double tau);
double prox_l32(double z, double tau);
double prox_l2(double z, double tau);

// Elementwise sum_i eta_i * prox_{p_i}(z, tau).
double theta(double z, double tau, const ProxWeights& w);
Eigen::VectorXd theta(const Eigen::VectorXd& z, double tau, const ProxWeights& w);

}  // namespace nestgil
