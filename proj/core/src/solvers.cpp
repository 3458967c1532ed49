#include "nestgil/solvers.hpp"

#include <cmath>
#include <mutex>
#include <thread>

namespace nestgil {

namespace {

void check_finite(const Eigen::VectorXd& v, double norm0, int stage) {
    if (!v.allFinite()) throw divergence_error(stage, "non-finite iterate");
    if (v.norm() > 1e8 * (norm0 + 1.0)) throw divergence_error(stage, "iterate norm exploded");
}

Eigen::VectorXd initial_point(const Eigen::VectorXd& y, const MeasurementOperator& phi,
                              const SolveOptions& opts) {
    return opts.x0.size() > 0 ? opts.x0 : phi.adjoint(y);
}

void record(SolverState& st, const SolveOptions& opts) {
    if (opts.objective) st.objective_trace.push_back(opts.objective(st.x));
    if (opts.record_iterates) st.iterates.push_back(st.x);
}

// x + g*(h - x): stays inside [min(x,h), max(x,h)] componentwise, and is h
// exactly at g == 1 (needed for the ISTA-reduction identity).
Eigen::VectorXd convex_combine(const Eigen::VectorXd& x, const Eigen::VectorXd& h, double g) {
    if (g == 1.0) return h;
    return x + g * (h - x);
}

}  // namespace

SolverState ista_solve(const Eigen::VectorXd& y, const MeasurementOperator& phi,
                       const RestoreFn& restore, const SolveOptions& opts) {
    if (!opts.mu) throw config_error("ista_solve: mu schedule required");
    SolverState st;
    st.x = initial_point(y, phi, opts);
    const double norm0 = st.x.norm();
    if (opts.objective) st.objective_trace.push_back(opts.objective(st.x));
    for (int k = 1; k <= opts.n_iters; ++k) {
        Eigen::VectorXd m = st.x - opts.mu(k) * phi.adjoint(phi.apply(st.x) - y);
        st.x = restore(m, k);
        check_finite(st.x, norm0, k);
        st.k = k;
        record(st, opts);
    }
    st.h = st.x;
    return st;
}

SolverState fista_solve(const Eigen::VectorXd& y, const MeasurementOperator& phi,
                        const RestoreFn& restore, const SolveOptions& opts) {
    if (!opts.mu) throw config_error("fista_solve: mu schedule required");
    SolverState st;
    st.x = initial_point(y, phi, opts);
    const double norm0 = st.x.norm();
    if (opts.objective) st.objective_trace.push_back(opts.objective(st.x));
    Eigen::VectorXd z = st.x;  // extrapolated point
    double t = 1.0;
    for (int k = 1; k <= opts.n_iters; ++k) {
        Eigen::VectorXd m = z - opts.mu(k) * phi.adjoint(phi.apply(z) - y);
        Eigen::VectorXd x_new = restore(m, k);
        check_finite(x_new, norm0, k);
        double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = x_new + ((t - 1.0) / t_new) * (x_new - st.x);
        st.x = std::move(x_new);
        t = t_new;
        st.k = k;
        record(st, opts);
    }
    st.h = st.x;
    return st;
}

SolverState nesterov2_solve(const Eigen::VectorXd& y, const MeasurementOperator& phi,
                            const RestoreFn& restore, const SolveOptions& opts) {
    if (!opts.mu) throw config_error("nesterov2_solve: mu schedule required");
    if (!opts.gamma) throw config_error("nesterov2_solve: gamma schedule required");
    SolverState st;
    st.x = initial_point(y, phi, opts);
    st.h = st.x;
    const double norm0 = st.x.norm();
    if (opts.objective) st.objective_trace.push_back(opts.objective(st.x));
    for (int k = 1; k <= opts.n_iters; ++k) {
        const double g = opts.gamma(k);
        Eigen::VectorXd u = convex_combine(st.x, st.h, g);
        Eigen::VectorXd m = st.h - opts.mu(k) * phi.adjoint(phi.apply(u) - y);
        st.h = restore(m, k);
        check_finite(st.h, norm0, k);
        st.x = convex_combine(st.x, st.h, g);
        check_finite(st.x, norm0, k);
        st.k = k;
        record(st, opts);
    }
    return st;
}

ReconstructResult nest_dgil_reconstruct(const std::vector<Eigen::VectorXd>& y_blocks,
                                        const MeasurementOperator& phi, const PatchGrid& grid,
                                        int height, int width, const ReconstructConfig& cfg) {
    cfg.schedules.validate();
    if (y_blocks.size() != grid.origins.size())
        throw data_error("nest_dgil_reconstruct: block count does not match grid");
    const int p = grid.patch_size;
    if (phi.cols() != static_cast<Eigen::Index>(p) * p)
        throw data_error("nest_dgil_reconstruct: operator size does not match patch size");
    for (const auto& y : y_blocks)
        if (y.size() != phi.rows())
            throw data_error("nest_dgil_reconstruct: measurement length mismatch");

    GilConfig gil = cfg.gil;
    RestoreFn restore = [&gil, &cfg, p](const Eigen::VectorXd& m, int k) {
        GilConfig stage_cfg = gil;
        stage_cfg.tau = schedule_tau(k, cfg.schedules);
        return vectorize(gil_restore(devectorize(m, p, p), stage_cfg));
    };

    SolveOptions opts;
    opts.n_iters = cfg.stages;
    opts.mu = [&cfg](int k) { return schedule_mu(k, cfg.schedules) / cfg.lipschitz; };
    opts.gamma = [&cfg](int k) { return schedule_gamma(k, cfg.schedules); };
    opts.record_iterates = cfg.record_stage_images;

    std::vector<SolverState> states(y_blocks.size());
    auto run_block = [&](size_t b) {
        // Phi^T y over-shoots by the normal-operator norm for non-orthonormal
        // sampling; dividing by it puts the start on the right intensity scale.
        SolveOptions block_opts = opts;
        block_opts.x0 = phi.adjoint(y_blocks[b]) / cfg.lipschitz;
        states[b] = nesterov2_solve(y_blocks[b], phi, restore, block_opts);
    };

    int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(y_blocks.size())));
    if (threads == 1) {
        for (size_t b = 0; b < y_blocks.size(); ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr eptr;
        std::mutex mtx;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (size_t b = t; b < y_blocks.size(); b += threads) {
                    try {
                        run_block(b);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(mtx);
                        if (!eptr) eptr = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (eptr) std::rethrow_exception(eptr);
    }

    auto assemble = [&](auto get_block) {
        std::vector<std::pair<Origin, Image>> patches;
        patches.reserve(y_blocks.size());
        for (size_t b = 0; b < y_blocks.size(); ++b)
            patches.emplace_back(grid.origins[b], devectorize(get_block(b), p, p));
        return assemble_weighted(patches, height, width);
    };

    ReconstructResult res;
    res.image = assemble([&](size_t b) { return states[b].x; });
    if (cfg.record_stage_images)
        for (int k = 0; k < cfg.stages; ++k)
            res.stage_images.push_back(assemble([&](size_t b) { return states[b].iterates[k]; }));
    return res;
}

}  // namespace nestgil
