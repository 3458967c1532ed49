#include "nestgil/phantom.hpp"

#include <cmath>

namespace nestgil {

namespace {

struct Ellipse {
    double intensity, a, b, x0, y0, phi_deg;
};

// Modified (high-contrast) Shepp-Logan parameter set.
constexpr Ellipse kSheppLogan[] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
};

}  // namespace

Image shepp_logan(int side) {
    Image img(side, side, 1.0);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            // pixel centers mapped to [-1, 1]^2, y up
            double x = (2.0 * (j + 0.5) / side) - 1.0;
            double y = 1.0 - (2.0 * (i + 0.5) / side);
            double v = 0.0;
            for (const Ellipse& e : kSheppLogan) {
                double phi = e.phi_deg * M_PI / 180.0;
                double c = std::cos(phi), s = std::sin(phi);
                double xr = (x - e.x0) * c + (y - e.y0) * s;
                double yr = -(x - e.x0) * s + (y - e.y0) * c;
                if (xr * xr / (e.a * e.a) + yr * yr / (e.b * e.b) <= 1.0) v += e.intensity;
            }
            img.at(i, j) = std::clamp(v, 0.0, 1.0);
        }
    return img;
}

Image disk_phantom(int side, double radius_fraction, double value) {
    Image img(side, side, 1.0);
    double c = (side - 1) / 2.0;
    double r = radius_fraction * side;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            if ((i - c) * (i - c) + (j - c) * (j - c) <= r * r) img.at(i, j) = value;
    return img;
}

}  // namespace nestgil
