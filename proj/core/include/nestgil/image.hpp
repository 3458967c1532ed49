#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nestgil/errors.hpp"

namespace nestgil {

// 2-D grayscale field, row-major, with a declared peak value used by PSNR.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> values;  // height * width, row-major
    double data_range = 1.0;

    Image() = default;
    Image(int h, int w, double range = 1.0)
        : height(h), width(w), values(static_cast<size_t>(h) * w, 0.0), data_range(range) {}

    double& at(int i, int j) { return values[static_cast<size_t>(i) * width + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * width + j]; }
    int pixels() const { return height * width; }

    void validate() const;
};

struct Origin {
    int row = 0;
    int col = 0;
};

// Deterministic row-major anchor grid covering the whole image. The last
// anchor per axis is clamped to H-patch / W-patch so patches stay in bounds.
struct PatchGrid {
    int patch_size = 33;
    int stride = 8;
    std::vector<Origin> origins;

    static PatchGrid make(int height, int width, int patch_size = 33, int stride = 8);
};

Eigen::VectorXd vectorize(const Image& img);
Image devectorize(const Eigen::VectorXd& v, int height, int width, double data_range = 1.0);

std::vector<std::pair<Origin, Image>> extract_patches(const Image& img, const PatchGrid& grid);

// Pixel value = sum of covering patches / coverage count. Every pixel must be
// covered at least once.
Image assemble_weighted(const std::vector<std::pair<Origin, Image>>& patches, int height,
                        int width, double data_range = 1.0);

}  // namespace nestgil
