#include "nestgil/image.hpp"

#include <cmath>

namespace nestgil {

void Image::validate() const {
    if (height <= 0 || width <= 0)
        throw data_error("image dimensions must be positive");
    if (values.size() != static_cast<size_t>(height) * width)
        throw data_error("image value count does not match height*width");
    if (!(data_range > 0.0))
        throw data_error("data_range must be positive");
    for (double v : values)
        if (!std::isfinite(v)) throw data_error("image contains non-finite value");
}

namespace {

std::vector<int> axis_anchors(int extent, int patch, int stride) {
    std::vector<int> anchors;
    for (int a = 0; a + patch < extent; a += stride) anchors.push_back(a);
    anchors.push_back(extent - patch);  // terminal clamp, also handles exact fit
    return anchors;
}

}  // namespace

PatchGrid PatchGrid::make(int height, int width, int patch_size, int stride) {
    if (patch_size > height || patch_size > width)
        throw data_error("patch_size exceeds image dimension");
    if (patch_size <= 0 || stride <= 0)
        throw config_error("patch_size and stride must be positive");
    PatchGrid grid;
    grid.patch_size = patch_size;
    grid.stride = stride;
    const auto rows = axis_anchors(height, patch_size, stride);
    const auto cols = axis_anchors(width, patch_size, stride);
    grid.origins.reserve(rows.size() * cols.size());
    for (int r : rows)
        for (int c : cols) grid.origins.push_back({r, c});
    return grid;
}

Eigen::VectorXd vectorize(const Image& img) {
    return Eigen::Map<const Eigen::VectorXd>(img.values.data(), img.pixels());
}

Image devectorize(const Eigen::VectorXd& v, int height, int width, double data_range) {
    if (v.size() != static_cast<Eigen::Index>(height) * width)
        throw data_error("vector length does not match height*width");
    Image img(height, width, data_range);
    Eigen::Map<Eigen::VectorXd>(img.values.data(), v.size()) = v;
    return img;
}

std::vector<std::pair<Origin, Image>> extract_patches(const Image& img, const PatchGrid& grid) {
    std::vector<std::pair<Origin, Image>> patches;
    patches.reserve(grid.origins.size());
    for (const Origin& o : grid.origins) {
        Image p(grid.patch_size, grid.patch_size, img.data_range);
        for (int i = 0; i < grid.patch_size; ++i)
            for (int j = 0; j < grid.patch_size; ++j) p.at(i, j) = img.at(o.row + i, o.col + j);
        patches.emplace_back(o, std::move(p));
    }
    return patches;
}

Image assemble_weighted(const std::vector<std::pair<Origin, Image>>& patches, int height,
                        int width, double data_range) {
    Image out(height, width, data_range);
    std::vector<int> coverage(static_cast<size_t>(height) * width, 0);
    for (const auto& [o, p] : patches) {
        if (o.row < 0 || o.col < 0 || o.row + p.height > height || o.col + p.width > width)
            throw data_error("patch exceeds target image bounds");
        for (int i = 0; i < p.height; ++i)
            for (int j = 0; j < p.width; ++j) {
                out.at(o.row + i, o.col + j) += p.at(i, j);
                ++coverage[static_cast<size_t>(o.row + i) * width + o.col + j];
            }
    }
    for (size_t idx = 0; idx < out.values.size(); ++idx) {
        if (coverage[idx] == 0) throw data_error("uncovered pixel in weighted assembly");
        out.values[idx] /= coverage[idx];
    }
    return out;
}

}  // namespace nestgil
