#include "nestgil/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace nestgil {

namespace {

void check_shapes(const Image& a, const Image& b) {
    if (a.height != b.height || a.width != b.width)
        throw data_error("metric: image shapes differ");
}

double mse(const Image& a, const Image& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.values.size());
}

}  // namespace

double psnr(const Image& ref, const Image& test) {
    check_shapes(ref, test);
    if (ref.data_range != test.data_range) throw data_error("psnr: data_range differs");
    double e = mse(ref, test);
    if (e == 0.0) return 300.0;
    double value = 10.0 * std::log10(ref.data_range * ref.data_range / e);
    return std::min(value, 300.0);
}

double ssim(const Image& ref, const Image& test) {
    check_shapes(ref, test);
    constexpr int win = 11;
    if (ref.height < win || ref.width < win) throw data_error("ssim: image smaller than window");
    const double range = ref.data_range;
    const double c1 = (0.01 * range) * (0.01 * range);
    const double c2 = (0.03 * range) * (0.03 * range);

    double w[win][win];
    double wsum = 0.0;
    const double sigma = 1.5;
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
            double di = i - (win - 1) / 2.0, dj = j - (win - 1) / 2.0;
            w[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
            wsum += w[i][j];
        }
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) w[i][j] /= wsum;

    double acc = 0.0;
    int count = 0;
    for (int i0 = 0; i0 + win <= ref.height; ++i0)
        for (int j0 = 0; j0 + win <= ref.width; ++j0) {
            double mx = 0.0, my = 0.0;
            for (int i = 0; i < win; ++i)
                for (int j = 0; j < win; ++j) {
                    mx += w[i][j] * ref.at(i0 + i, j0 + j);
                    my += w[i][j] * test.at(i0 + i, j0 + j);
                }
            double vx = 0.0, vy = 0.0, cov = 0.0;
            for (int i = 0; i < win; ++i)
                for (int j = 0; j < win; ++j) {
                    double dx = ref.at(i0 + i, j0 + j) - mx;
                    double dy = test.at(i0 + i, j0 + j) - my;
                    vx += w[i][j] * dx * dx;
                    vy += w[i][j] * dy * dy;
                    cov += w[i][j] * dx * dy;
                }
            double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
            double den = (mx * mx + my * my + c1) * (vx + vy + c2);
            acc += num / den;
            ++count;
        }
    return acc / count;
}

double rmse_hu(const Image& ref, const Image& test) {
    check_shapes(ref, test);
    return std::sqrt(mse(ref, test));
}

double l1_loss(const std::vector<Image>& ref, const std::vector<Image>& test) {
    if (ref.empty() || ref.size() != test.size()) throw data_error("l1_loss: batch shape mismatch");
    double acc = 0.0;
    size_t pixels = ref.front().values.size();
    for (size_t b = 0; b < ref.size(); ++b) {
        check_shapes(ref[b], test[b]);
        if (ref[b].values.size() != pixels) throw data_error("l1_loss: inhomogeneous batch");
        for (size_t i = 0; i < pixels; ++i) acc += std::abs(test[b].values[i] - ref[b].values[i]);
    }
    return acc / (static_cast<double>(ref.size()) * static_cast<double>(pixels));
}

MetricReport evaluate(const Image& ref, const Image& test, bool ct_mode) {
    MetricReport r;
    r.psnr = psnr(ref, test);
    r.ssim = ssim(ref, test);
    if (ct_mode) r.rmse_hu = rmse_hu(ref, test);
    r.l1 = l1_loss({ref}, {test});
    return r;
}

std::string MetricReport::csv_row(const std::string& name) const {
    char buf[256];
    if (rmse_hu)
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g", name.c_str(), psnr, ssim,
                      *rmse_hu, l1);
    else
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,,%.17g", name.c_str(), psnr, ssim, l1);
    return buf;
}

}  // namespace nestgil
