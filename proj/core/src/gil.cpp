#include "nestgil/gil.hpp"

#include <cmath>
#include <cstdio>

namespace nestgil {

void GilConfig::validate() const {
    if (n_domains < 1) throw config_error("gil: n_domains must be >= 1");
    if (tau < 0.0) throw config_error("gil: tau must be nonnegative");
    if (extractor == nullptr) throw config_error("gil: extractor not set");
    if (!(normalization_epsilon > 0.0)) throw config_error("gil: epsilon must be positive");
    weights.normalized();  // throws on sum(beta) == 0
}

namespace {

void check_contraction(const GilConfig& cfg) {
    if (cfg.psi != PsiVariant::identity) return;
    double rho = cfg.tau * cfg.extractor->spectral_bound;
    if (rho >= 1.0) {
        if (cfg.strict_contraction)
            throw config_error("gil: tau * spectral_bound >= 1, series diverges");
        std::fprintf(stderr, "nestgil: warning: tau*spectral_bound = %g >= 1, series may diverge\n",
                     rho);
    }
}

FeatureStack psi_apply(FeatureStack fs, const GilConfig& cfg) {
    if (cfg.psi == PsiVariant::identity) return fs;
    // per-pixel channel normalization r / max(||r||_2, eps)
    for (int i = 0; i < fs.height; ++i)
        for (int j = 0; j < fs.width; ++j) {
            double norm2 = 0.0;
            for (int c = 0; c < fs.channels; ++c) norm2 += fs.at(c, i, j) * fs.at(c, i, j);
            double scale = 1.0 / std::max(std::sqrt(norm2), cfg.normalization_epsilon);
            for (int c = 0; c < fs.channels; ++c) fs.at(c, i, j) *= scale;
        }
    return fs;
}

// Alternating half-operator state: odd depths hold features, even hold images.
struct ChainState {
    bool is_features = false;
    Image img;
    FeatureStack feat;
};

// One half-step: psi(K(.)) at odd depth, -tau*K'(.) at even depth.
void half_step(ChainState& st, int depth, const GilConfig& cfg) {
    if (depth % 2 == 1) {
        st.feat = psi_apply(cfg.extractor->apply(st.img), cfg);
        st.is_features = true;
    } else {
        st.img = cfg.extractor->adjoint(st.feat);
        for (double& v : st.img.values) v *= -cfg.tau;
        st.is_features = false;
    }
}

}  // namespace

Image m_apply(const Image& v, const GilConfig& cfg) {
    cfg.validate();
    Image out = cfg.extractor->adjoint(psi_apply(cfg.extractor->apply(v), cfg));
    for (double& x : out.values) x *= -cfg.tau;
    out.data_range = v.data_range;
    return out;
}

SeriesResult spectral_series(const Image& m, const GilConfig& cfg) {
    cfg.validate();
    check_contraction(cfg);
    const int n = cfg.n_domains - 1;

    SeriesResult res;
    res.terms.reserve(cfg.n_domains);
    Image cur = m;
    for (int i = 1; i <= n; ++i) {
        cur = m_apply(cur, cfg);
        res.terms.push_back(cur);
    }

    // Remainder: walk n+1 half-operators in, apply theta, walk n+1 back out.
    ChainState st;
    st.img = m;
    int depth = 0;
    for (int j = 0; j < n + 1; ++j) half_step(st, ++depth, cfg);
    if (st.is_features)
        for (double& z : st.feat.data) z = theta(z, cfg.tau, cfg.weights);
    else
        for (double& z : st.img.values) z = theta(z, cfg.tau, cfg.weights);
    for (int j = 0; j < n + 1; ++j) half_step(st, ++depth, cfg);
    st.img.data_range = m.data_range;
    res.terms.push_back(st.img);

    res.h = m;
    for (const Image& w : res.terms)
        for (int p = 0; p < res.h.pixels(); ++p) res.h.values[p] += w.values[p];
    return res;
}

Image gil_restore(const Image& m, const GilConfig& cfg) {
    return spectral_series(m, cfg).h;
}

}  // namespace nestgil
