#pragma once

#include "nestgil/image.hpp"

namespace nestgil {

// Modified Shepp-Logan head phantom rasterized on a side x side grid,
// intensities clamped to [0, 1], data_range 1.
Image shepp_logan(int side);

// Uniform disk of the given radius fraction centered on the image.
Image disk_phantom(int side, double radius_fraction = 0.4, double value = 1.0);

}  // namespace nestgil
