#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nestgil/image.hpp"

namespace nestgil {

struct MetricReport {
    double psnr = 0.0;
    double ssim = 0.0;
    std::optional<double> rmse_hu;  // CT mode only
    double l1 = 0.0;

    // "name,psnr,ssim,rmse_hu,l1" with an empty rmse_hu field outside CT mode
    std::string csv_row(const std::string& name) const;
};

// 10 log10(range^2 / MSE), capped at 300 dB for identical images.
double psnr(const Image& ref, const Image& test);

// Standard single-scale SSIM: 11x11 Gaussian window, sigma 1.5,
// C1 = (0.01 range)^2, C2 = (0.03 range)^2, mean over valid positions.
double ssim(const Image& ref, const Image& test);

// Root mean square difference; inputs are assumed to already be in HU.
double rmse_hu(const Image& ref, const Image& test);

// (1 / (N_b N)) sum_i ||test_i - ref_i||_1
double l1_loss(const std::vector<Image>& ref, const std::vector<Image>& test);

MetricReport evaluate(const Image& ref, const Image& test, bool ct_mode = false);

}  // namespace nestgil
