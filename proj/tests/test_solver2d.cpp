#include "doctest.h"

#include <cmath>
#include <limits>

#include "corrector/oracles.hpp"
#include "corrector/solver.hpp"

using namespace corrector;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CorrectorProblem cash_only_problem(double cost1, double cost2, int n) {
    CorrectorProblem problem;
    problem.sigmaEff = Eigen::MatrixXd::Identity(2, 2);
    problem.alphaBar = Eigen::MatrixXd::Identity(2, 2);
    problem.lambda = Eigen::MatrixXd(3, 3);
    problem.lambda << 0.0, cost1, cost2, cost1, 0.0, kInf, cost2, kInf, 0.0;
    problem.grid =
        Grid(2, n, default_radius(problem.sigmaEff, problem.alphaBar, problem.lambda));
    return problem;
}

}  // namespace

TEST_CASE("stencil reproduces the generator exactly on coupled quadratics") {
    const double h = 0.02;
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 0.4, 0.4, 0.8;
    const Stencil stencil = build_stencil(A, 2, h);
    CHECK(stencil.monotone);

    Eigen::MatrixXd Q(2, 2);
    Q << 0.7, -0.2, -0.2, 1.1;
    const Eigen::Vector2d base(0.13, -0.05);
    auto quad = [&](const Eigen::Vector2d& x) { return x.dot(Q * x); };
    double applied = stencil.center * quad(base);
    for (const auto& term : stencil.neighbors) {
        const Eigen::Vector2d x = base + h * Eigen::Vector2d(term.dir[0], term.dir[1]);
        applied += term.coeff * quad(x);
    }
    // 0.5 Tr(A D^2 (x . Q x)) = Tr(A Q).
    CHECK(applied == doctest::Approx((A * Q).trace()).epsilon(1e-9));
}

TEST_CASE("stencil flags a dominance violation without giving up") {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 1.5, 1.5, 1.0;
    const Stencil stencil = build_stencil(A, 2, 0.01);
    CHECK_FALSE(stencil.monotone);
}

TEST_CASE("generator of w = rho1^2 under the identity diffusion") {
    CorrectorProblem problem = cash_only_problem(0.001, 0.001, 21);
    const Grid& grid = problem.grid;
    Eigen::VectorXd w(grid.size());
    for (std::int64_t k = 0; k < grid.size(); ++k) {
        const double rho1 = grid.rho(k)(0);
        w(k) = rho1 * rho1;
    }
    CHECK(apply_generator(w, grid.origin(), problem) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("separable two-asset instance matches the sum of scalar solutions") {
    const CorrectorProblem problem = cash_only_problem(0.001, 0.001, 61);
    const CorrectorSolution sol = solve_policy_iteration(problem);
    const SeparableSolution oracle = separable_solution(problem);

    CHECK(std::abs(sol.aBar - oracle.aHat) / oracle.aHat <= 0.02);
    CHECK(sol.neumannNodes == 0);
    CHECK(sol.monotoneStencil);

    // The no-transaction region is the oracle product box up to grid width.
    const double rhoPlus = oracle.axes[0].rhoPlus;
    const Grid& grid = problem.grid;
    for (std::int64_t k = 0; k < grid.size(); ++k) {
        const Eigen::VectorXd rho = grid.rho(k);
        const double gap = std::max(std::abs(rho(0)), std::abs(rho(1))) - rhoPlus;
        const bool nt = sol.bindingSets[static_cast<std::size_t>(k)] == 0;
        if (nt) {
            CHECK(gap <= 2.0 * grid.h);
        } else {
            CHECK(gap >= -2.0 * grid.h);
        }
    }

    // Mask and policy agree about where the solution diffuses freely.
    for (std::int64_t k = 0; k < grid.size(); ++k) {
        const bool maskNt = sol.bindingSets[static_cast<std::size_t>(k)] == 0;
        const bool policyNt = sol.policy[static_cast<std::size_t>(k)] == kDiffuse;
        if (maskNt) CHECK(policyNt);
    }
}

TEST_CASE("solution is symmetric under point reflection for symmetric costs") {
    const CorrectorProblem problem = cash_only_problem(0.001, 0.001, 41);
    const CorrectorSolution sol = solve_policy_iteration(problem);
    const Grid& grid = problem.grid;
    double worst = 0.0;
    for (std::int64_t k = 0; k < grid.size(); ++k) {
        auto c = grid.unpack(k);
        const std::int64_t m = grid.pack({grid.n - 1 - c[0], grid.n - 1 - c[1], 0});
        worst = std::max(worst, std::abs(sol.w(k) - sol.w(m)));
    }
    CHECK(worst <= 1e-6 * sol.w.cwiseAbs().maxCoeff() + 1e-14);
}

TEST_CASE("asymmetric cash costs widen the expensive axis") {
    const CorrectorProblem problem = cash_only_problem(0.001, 0.002, 61);
    const CorrectorSolution sol = solve_policy_iteration(problem);
    const Grid& grid = problem.grid;
    const int center = (grid.n - 1) / 2;

    int width1 = 0;
    int width2 = 0;
    for (int i = 0; i < grid.n; ++i) {
        if (sol.bindingSets[static_cast<std::size_t>(grid.pack({i, center, 0}))] == 0) ++width1;
        if (sol.bindingSets[static_cast<std::size_t>(grid.pack({center, i, 0}))] == 0) ++width2;
    }
    CHECK(width1 < width2);

    const SeparableSolution oracle = separable_solution(problem);
    CHECK(std::abs(sol.aBar - oracle.aHat) / oracle.aHat <= 0.02);
}

TEST_CASE("direct swaps activate and change the region shape") {
    CorrectorProblem problem = cash_only_problem(0.001, 0.001, 61);
    problem.lambda(1, 2) = 0.001;
    problem.lambda(2, 1) = 0.001;
    const CorrectorSolution sol = solve_policy_iteration(problem);

    bool sawSwap = false;
    for (std::int64_t k = 0; k < problem.grid.size(); ++k) {
        const int action = sol.policy[static_cast<std::size_t>(k)];
        if (action == pair_id(2, 1, 2) || action == pair_id(2, 2, 1)) {
            sawSwap = true;
            break;
        }
    }
    CHECK(sawSwap);
    CHECK_THROWS_AS(separable_solution(problem), Error);
}

TEST_CASE("warm-started iterative backend agrees with the direct factorization") {
    const CorrectorProblem problem = cash_only_problem(0.001, 0.001, 41);
    SolverOptions direct;
    direct.backend = LinearBackend::Direct;
    SolverOptions iterative;
    iterative.backend = LinearBackend::Iterative;
    const CorrectorSolution a = solve_policy_iteration(problem, direct);
    const CorrectorSolution b = solve_policy_iteration(problem, iterative);
    CHECK(std::abs(a.aBar - b.aBar) <= 1e-10 * std::max(1.0, std::abs(a.aBar)));
    CHECK((a.w - b.w).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(a.bindingSets == b.bindingSets);
    // Transfer labels may tie-break differently between backends on the
    // symmetry diagonal, but the diffuse set must match exactly.
    for (std::size_t k = 0; k < a.policy.size(); ++k)
        CHECK((a.policy[k] == kDiffuse) == (b.policy[k] == kDiffuse));
}
