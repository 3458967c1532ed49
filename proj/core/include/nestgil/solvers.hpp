#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nestgil/gil.hpp"
#include "nestgil/image.hpp"
#include "nestgil/operators.hpp"
#include "nestgil/schedules.hpp"

namespace nestgil {

using RestoreFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, int)>;
using ScheduleFn = std::function<double(int)>;
using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct SolveOptions {
    int n_iters = 100;
    ScheduleFn mu;                    // step length per stage, required
    ScheduleFn gamma;                 // relaxation per stage (nesterov2 only)
    ObjectiveFn objective;            // recorded into objective_trace when set
    bool record_iterates = false;
    Eigen::VectorXd x0;               // empty -> Phi^T y
};

struct SolverState {
    int k = 0;
    Eigen::VectorXd x;
    Eigen::VectorXd h;
    std::vector<double> objective_trace;       // F(x_0) .. F(x_K) when objective given
    std::vector<Eigen::VectorXd> iterates;     // x_1 .. x_K when record_iterates
};

// m_k = x_{k-1} - mu_k Phi^T(Phi x_{k-1} - y); x_k = restore(m_k, k)
SolverState ista_solve(const Eigen::VectorXd& y, const MeasurementOperator& phi,
                       const RestoreFn& restore, const SolveOptions& opts);

// ISTA plus standard momentum t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.
SolverState fista_solve(const Eigen::VectorXd& y, const MeasurementOperator& phi,
                        const RestoreFn& restore, const SolveOptions& opts);

// Nesterov-II: u_k = (1-g)x + g h; m_k = h - mu_k Phi^T(Phi u_k - y);
// h_k = restore(m_k, k); x_k = (1-g)x + g h_k. Convex combinations keep the
// iterates inside any convex set that restore projects onto.
SolverState nesterov2_solve(const Eigen::VectorXd& y, const MeasurementOperator& phi,
                            const RestoreFn& restore, const SolveOptions& opts);

struct ReconstructConfig {
    GilConfig gil;              // gil.tau is driven by the tau_k schedule
    ScheduleParams schedules{};
    int stages = 20;
    double lipschitz = 1.0;     // ||Phi^T Phi||; scales the mu_k schedule
    int threads = 1;            // concurrent blocks; assembly order is fixed
    bool record_stage_images = false;
};

struct ReconstructResult {
    Image image;
    std::vector<Image> stage_images;  // assembled x_k per stage when requested
};

// Per-block Nesterov-II with GIL restoration, then weighted overlap assembly.
// y_blocks follow grid.origins order; Phi is shared across blocks.
ReconstructResult nest_dgil_reconstruct(const std::vector<Eigen::VectorXd>& y_blocks,
                                        const MeasurementOperator& phi, const PatchGrid& grid,
                                        int height, int width, const ReconstructConfig& cfg);

}  // namespace nestgil
