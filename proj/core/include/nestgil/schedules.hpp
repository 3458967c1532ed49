#pragma once

#include "nestgil/errors.hpp"

namespace nestgil {

// Softplus/sigmoid parameter schedules. alpha1/alpha2 < 0 make the step
// length and threshold decay, alpha3 > 0 drives the relaxation toward 1.
struct ScheduleParams {
    double alpha1 = -0.2, c1 = 0.1;   // step length mu_k
    double alpha2 = -0.5, c2 = -2.0;  // threshold tau_k
    double alpha3 = 0.5, c3 = 0.0;    // relaxation gamma_k

    void validate() const {
        if (!(alpha1 < 0.0)) throw config_error("schedule: alpha1 must be negative");
        if (!(alpha2 < 0.0)) throw config_error("schedule: alpha2 must be negative");
        if (!(alpha3 > 0.0)) throw config_error("schedule: alpha3 must be positive");
    }
};

double softplus(double x);

// mu_k = sp(alpha1 * k + c1)
double schedule_mu(int k, const ScheduleParams& p);
// tau_k = sp(alpha2 * k + c2)
double schedule_tau(int k, const ScheduleParams& p);
// gamma_k = sigma(sp(alpha3 * k + c3)) = 1 / (1 + exp(1 - 2 sp(...)))
double schedule_gamma(int k, const ScheduleParams& p);

}  // namespace nestgil
