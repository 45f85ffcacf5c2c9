#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "corrector/problem.hpp"

namespace corrector {

struct McOptions {
    double horizon = 2e4;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    int paths = 16;
    int threads = 0;          // 0 picks the hardware count
    Eigen::VectorXd start;    // empty means the origin
};

struct McResult {
    double estimate = 0.0;        // time-averaged running plus transfer cost
    double stderrEstimate = 0.0;  // sample standard error across paths
    std::int64_t escapes = 0;     // diffusion steps clamped back into the grid
};

// Simulates rho' = alphaBar dB, applies the solved transfer policy at the
// nearest grid node after every step, and averages running cost f(rho) dt
// plus lambda^{ij} h per transfer over the horizon. Independent of the
// linear-algebra path, so it cross-checks the eigenvalue aBar.
//
// Throws NoNTRegion when the policy does not diffuse at the start node and
// NonConvergence when paths persistently leave the grid or reach a node the
// solver never resolved.
McResult mc_ergodic_cost(const CorrectorSolution& solution, const CorrectorProblem& problem,
                         const McOptions& opts);

// Convenience overload with positional horizon, step and seed.
McResult mc_ergodic_cost(const CorrectorSolution& solution, const CorrectorProblem& problem,
                         double horizon, double dt, std::uint64_t seed);

}  // namespace corrector
