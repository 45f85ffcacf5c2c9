#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "corrector/grid.hpp"

namespace corrector {

// Per-node actions. Nonnegative values are transfer pair ids (see pair_id);
// kNeumann marks a boundary node with no admissible inward transfer, handled
// by a zero-derivative surrogate row and flagged in the solution.
inline constexpr int kDiffuse = -1;
inline constexpr int kNeumann = -2;

using PolicyField = std::vector<int>;

// Ergodic eigenvalue problem on the truncated grid [-R,R]^d:
//   max{ aBar - f(rho) - L w ; max_{i!=j} (w(rho) - w(rho + h d^{ij}))/h - lambda^{ij} } = 0
// with L w = (1/2) Tr(alphaBar alphaBar^T D^2 w) and running cost
// f(rho) = |sigmaEff rho|^2 / 2.
struct CorrectorProblem {
    Grid grid;
    Eigen::MatrixXd sigmaEff;  // d x d running-cost matrix
    Eigen::MatrixXd alphaBar;  // d x d diffusion of the deviation process
    Eigen::MatrixXd lambda;    // (d+1) x (d+1) costs, inf = transfer not allowed

    int d() const { return grid.d; }

    double running_cost(const Eigen::VectorXd& rho) const {
        return 0.5 * (sigmaEff * rho).squaredNorm();
    }

    Eigen::MatrixXd diffusion_matrix() const { return alphaBar * alphaBar.transpose(); }

    // Ordered pairs (i,j) with finite lambda^{i,j}, lexicographic.
    std::vector<TransferPair> finite_pairs() const;

    // Largest finite cost entry, 0 when no transfer is allowed.
    double max_finite_cost() const;

    // Solver entry conditions: n >= 5, matrix shapes, finite nonnegative
    // costs with zero diagonal, alphaBar alphaBar^T positive definite, and C
    // bounded along every axis. Throws on violation.
    void validate() const;
};

enum class LinearBackend { Auto, Direct, Iterative };

struct SolverOptions {
    double tolA = 1e-9;          // eigenvalue stall threshold, scaled by max(1,|aBar|)
    double tolSwitch = 1e-10;    // advantage a challenger action must show to replace the current one
    int maxIters = 500;
    LinearBackend backend = LinearBackend::Auto;
    std::int64_t directSolverLimit = 200000;  // unknown count above which Auto picks the iterative backend
    double iterativeTol = 1e-13;
    int iterativeMaxIters = 20000;
};

struct CorrectorSolution {
    Grid grid;
    Eigen::VectorXd w;
    double aBar = 0.0;
    PolicyField policy;
    // Bitmask per node over unordered pair slots (see unordered_pair_slot):
    // bit set when |r^{ij}| <= tolBind for either orientation of the pair.
    std::vector<std::uint8_t> bindingSets;
    int iterations = 0;
    double residualNorm = 0.0;  // max-norm of the final linear-system residual
    double tolBind = 0.0;
    std::vector<double> aHistory;  // eigenvalue after each policy evaluation
    int neumannNodes = 0;
    bool monotoneStencil = true;
    double discount = 0.0;  // eta of the discounted solve, 0 for the ergodic solve
};

}  // namespace corrector
