#include "nestgil/schedules.hpp"

#include <cmath>

namespace nestgil {

double softplus(double x) {
    // overflow-safe ln(1 + e^x)
    if (x > 30.0) return x;
    return std::log1p(std::exp(x));
}

double schedule_mu(int k, const ScheduleParams& p) { return softplus(p.alpha1 * k + p.c1); }

double schedule_tau(int k, const ScheduleParams& p) { return softplus(p.alpha2 * k + p.c2); }

double schedule_gamma(int k, const ScheduleParams& p) {
    double g = softplus(p.alpha3 * k + p.c3);
    return 1.0 / (1.0 + std::exp(1.0 - 2.0 * g));
}

}  // namespace nestgil
