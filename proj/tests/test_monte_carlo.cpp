#include "doctest.h"

#include <cmath>

#include "corrector/monte_carlo.hpp"
#include "corrector/oracles.hpp"
#include "corrector/solver.hpp"

using namespace corrector;

namespace {

CorrectorProblem standard_problem(int n) {
    CorrectorProblem problem;
    problem.sigmaEff = Eigen::MatrixXd::Identity(1, 1);
    problem.alphaBar = Eigen::MatrixXd::Identity(1, 1);
    problem.lambda = Eigen::MatrixXd(2, 2);
    problem.lambda << 0.0, 0.001, 0.001, 0.0;
    problem.grid =
        Grid(1, n, default_radius(problem.sigmaEff, problem.alphaBar, problem.lambda));
    return problem;
}

}  // namespace

TEST_CASE("frozen dynamics integrate the running cost exactly") {
    CorrectorProblem problem = standard_problem(41);
    problem.alphaBar.setZero();

    // Hand-built all-diffuse solution; the simulation only reads the policy.
    CorrectorSolution sol;
    sol.grid = problem.grid;
    sol.policy.assign(static_cast<std::size_t>(problem.grid.size()), kDiffuse);
    sol.w = Eigen::VectorXd::Zero(problem.grid.size());

    McOptions opts;
    opts.horizon = 10.0;
    opts.dt = 1e-3;
    opts.paths = 4;
    opts.start = Eigen::VectorXd::Constant(1, 0.05);
    const McResult result = mc_ergodic_cost(sol, problem, opts);

    CHECK(result.estimate == doctest::Approx(0.5 * 0.05 * 0.05).epsilon(1e-14));
    CHECK(result.stderrEstimate == doctest::Approx(0.0));
    CHECK(result.escapes == 0);
}

TEST_CASE("fixed seeds reproduce the estimate bit for bit") {
    const CorrectorProblem problem = standard_problem(81);
    const CorrectorSolution sol = solve_policy_iteration(problem);

    McOptions opts;
    opts.horizon = 50.0;
    opts.dt = 1e-3;
    opts.seed = 42;
    const McResult first = mc_ergodic_cost(sol, problem, opts);
    const McResult again = mc_ergodic_cost(sol, problem, opts);
    CHECK(first.estimate == again.estimate);
    CHECK(first.stderrEstimate == again.stderrEstimate);

    // The result must not depend on how paths are scheduled.
    opts.threads = 1;
    const McResult serial = mc_ergodic_cost(sol, problem, opts);
    CHECK(serial.estimate == first.estimate);

    opts.threads = 0;
    opts.seed = 43;
    const McResult other = mc_ergodic_cost(sol, problem, opts);
    CHECK(other.estimate != first.estimate);
}

TEST_CASE("simulated cost approaches the ergodic eigenvalue") {
    const CorrectorProblem problem = standard_problem(81);
    const CorrectorSolution sol = solve_policy_iteration(problem);
    const OneDimSolution oracle = solve_1d_closed_form(1.0, 1.0, 0.001, 0.001);

    McOptions opts;
    opts.horizon = 2000.0;
    opts.dt = 1e-3;
    opts.seed = 7;
    const McResult result = mc_ergodic_cost(sol, problem, opts);

    CHECK(std::abs(result.estimate - oracle.aBar) / oracle.aBar <= 0.05);
    CHECK(result.stderrEstimate > 0.0);
    CHECK(std::abs(result.estimate - sol.aBar) <= 5.0 * result.stderrEstimate +
                                                      sol.aBar * (problem.grid.h +
                                                                  std::sqrt(opts.dt)));

    // Two disjoint seeds agree within their combined uncertainty.
    opts.seed = 1234;
    const McResult other = mc_ergodic_cost(sol, problem, opts);
    const double combined =
        std::hypot(result.stderrEstimate, other.stderrEstimate);
    CHECK(std::abs(result.estimate - other.estimate) <= 6.0 * combined);
}

TEST_CASE("simulation refuses a policy with no diffusion at the start") {
    const CorrectorProblem problem = standard_problem(41);
    CorrectorSolution sol;
    sol.grid = problem.grid;
    sol.policy.assign(static_cast<std::size_t>(problem.grid.size()), kDiffuse);
    sol.w = Eigen::VectorXd::Zero(problem.grid.size());
    sol.policy[static_cast<std::size_t>(problem.grid.origin())] = pair_id(1, 0, 1);

    McOptions opts;
    opts.horizon = 1.0;
    CHECK_THROWS_AS(mc_ergodic_cost(sol, problem, opts), Error);
}

TEST_CASE("option validation") {
    const CorrectorProblem problem = standard_problem(41);
    CorrectorSolution sol;
    sol.grid = problem.grid;
    sol.policy.assign(static_cast<std::size_t>(problem.grid.size()), kDiffuse);
    sol.w = Eigen::VectorXd::Zero(problem.grid.size());

    McOptions opts;
    opts.horizon = 0.0;
    CHECK_THROWS_AS(mc_ergodic_cost(sol, problem, opts), Error);
    opts.horizon = 1.0;
    opts.start = Eigen::VectorXd::Constant(1, 10.0);
    CHECK_THROWS_AS(mc_ergodic_cost(sol, problem, opts), Error);
}
