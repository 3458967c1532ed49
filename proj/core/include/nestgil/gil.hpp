#pragma once

#include <vector>

#include "nestgil/image.hpp"
#include "nestgil/operators.hpp"
#include "nestgil/prox.hpp"

namespace nestgil {

// Potential shape behind the geometric prior: identity corresponds to
// phi(r) = (1/2)||r||^2, normalized to phi(r) = ||r|| (per-pixel channel
// normalization guarded by epsilon).
enum class PsiVariant { identity, normalized };

struct GilConfig {
    int n_domains = 6;  // n + 1 series domains
    PsiVariant psi = PsiVariant::identity;
    double tau = 0.0;
    const FeatureExtractor* extractor = nullptr;
    ProxWeights weights{};
    double normalization_epsilon = 1e-8;
    bool strict_contraction = false;

    void validate() const;
};

struct SeriesResult {
    Image h;                   // m + sum of all terms
    std::vector<Image> terms;  // omega_1 .. omega_{n+1}
};

// One application of M(v) = -tau * K'(psi(K v)).
Image m_apply(const Image& v, const GilConfig& cfg);

// Neumann-series restoration: omega_i = M^i(m) for i = 1..n, plus the
// truncation remainder built by inserting theta_tau at the middle of the
// depth-(n+1) half-operator chain (left/right parity of the feature
// extractor).
SeriesResult spectral_series(const Image& m, const GilConfig& cfg);

Image gil_restore(const Image& m, const GilConfig& cfg);

}  // namespace nestgil
