#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "corrector/problem.hpp"

namespace corrector {

// Domain half-width for auto-sized grids: margin times the free boundary of
// the scalar comparison instance with sigma^2 = c1 (largest eigenvalue of
// sigmaEff sigmaEff^T), alphaBar^2 = c2 (largest eigenvalue of
// alphaBar alphaBar^T) and both one-sided costs equal to twice the largest
// finite lambda entry. Clamped below by minRadius so vanishing costs still
// give a usable domain.
double default_radius(const Eigen::MatrixXd& sigmaEff, const Eigen::MatrixXd& alphaBar,
                      const Eigen::MatrixXd& lambda, double margin = 3.0,
                      double minRadius = 1e-3);

// Monotone (sign-split) second-order stencil for (1/2) Tr(A D^2 w): axis
// neighbours carry (a_ii - sum_{j!=i}|a_ij|) / (2h^2), positive cross terms
// use the (+e_i+e_j)/(-e_i-e_j) corners, negative ones the mixed corners,
// each at |a_ij| / (2h^2). monotone is false when some axis coefficient is
// negative (missing diagonal dominance); the scheme still assembles.
struct Stencil {
    struct Term {
        std::array<int, 3> dir;
        double coeff;
    };
    std::vector<Term> neighbors;
    double center = 0.0;
    bool monotone = true;
};

Stencil build_stencil(const Eigen::MatrixXd& A, int d, double h);

// (1/2) Tr(alphaBar alphaBar^T D^2 w) at a node whose full stencil lies in
// the grid (StencilOutOfDomain otherwise). Exact on quadratics.
double apply_generator(const Eigen::VectorXd& w, std::int64_t node,
                       const CorrectorProblem& problem);

// r^{ij}(rho) = (w(rho) - w(rho + h d^{ij}))/h - lambda^{ij}; the gradient
// constraint holds iff r <= 0. StencilOutOfDomain when the target leaves the
// grid, DegenerateInput when lambda^{ij} is not finite.
double transfer_residual(const Eigen::VectorXd& w, std::int64_t node, int i, int j,
                         const CorrectorProblem& problem);

// All-Diffuse start with boundary nodes forced to an admissible inward
// transfer (target in grid, strictly fewer extreme coordinates), picking the
// most central target; kNeumann where no pair qualifies.
PolicyField initial_policy(const CorrectorProblem& problem);

// Solves the linear system of a fixed policy: one row per node (Diffuse:
// generator + f = aBar; Transfer: w(rho) - w(target) = h lambda; Neumann:
// w(rho) = w(inward diagonal neighbour)) plus the normalization w(0) = 0,
// with aBar as the extra unknown. Transfer chains must terminate at Diffuse
// nodes and at least one Diffuse node must exist (SingularSystem otherwise).
std::pair<Eigen::VectorXd, double> evaluate_policy(const PolicyField& policy,
                                                   const CorrectorProblem& problem,
                                                   const SolverOptions& opts = {});

// One Howard step. Every action's equation residual is read as the member it
// contributes to the pointwise max (Diffuse: aBar - f - L w; Transfer(i,j):
// r^{ij}); a node keeps its current action unless a challenger beats it by
// more than tolSwitch. Boundary nodes are re-forced to the admissible inward
// transfer with the largest residual. Ties go to the lexicographically
// smaller action.
PolicyField improve_policy(const Eigen::VectorXd& w, double aBar, const PolicyField& current,
                           const CorrectorProblem& problem, const SolverOptions& opts = {});

// Howard iteration from initial_policy until the eigenvalue stalls and the
// policy is stable. Validates that every node within two steps of the
// boundary has a binding constraint at convergence (DomainTooSmall
// otherwise: the no-transaction region hit the artificial boundary).
CorrectorSolution solve_policy_iteration(const CorrectorProblem& problem,
                                         const SolverOptions& opts = {});

// Discounted variant: Diffuse rows become eta w - L w = f, no eigenvalue
// unknown and no normalization row; aBar of the result holds the estimate
// eta * min(w). The solution is checked nodewise against the support-
// function envelope (delta_C(rho) - K1)^+ <= w <= K2/eta + delta_C(rho).
CorrectorSolution solve_discounted(const CorrectorProblem& problem, double eta,
                                   const SolverOptions& opts = {});

// Bitmask per node over unordered pair slots, set when |r^{ij}| <= tolBind
// for either orientation with the target in the grid.
std::vector<std::uint8_t> binding_sets(const Eigen::VectorXd& w, const CorrectorProblem& problem,
                                       double tolBind);

// tolBind = max(10 tolSwitch, h * lambdaMax * 1e-3), the scale separating
// active constraints from discretization slack.
double binding_tolerance(const CorrectorProblem& problem, const SolverOptions& opts);

}  // namespace corrector
