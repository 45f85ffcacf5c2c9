#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "corrector/oracles.hpp"

using namespace corrector;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CorrectorProblem separable_problem() {
    CorrectorProblem problem;
    problem.grid = Grid(2, 5, 0.5);
    problem.sigmaEff = Eigen::MatrixXd::Identity(2, 2);
    problem.alphaBar = Eigen::MatrixXd::Identity(2, 2);
    problem.lambda = Eigen::MatrixXd(3, 3);
    problem.lambda << 0.0, 0.001, 0.002, 0.001, 0.0, kInf, 0.002, kInf, 0.0;
    return problem;
}

}  // namespace

TEST_CASE("reference scalar solution: boundary and eigenvalue") {
    const OneDimSolution sol = solve_1d_closed_form(1.0, 1.0, 0.001, 0.001);
    CHECK(sol.rhoPlus == doctest::Approx(std::cbrt(0.0015)).epsilon(1e-15));
    CHECK(sol.rhoPlus == doctest::Approx(0.114471424255333).epsilon(1e-12));
    CHECK(sol.aBar == doctest::Approx(0.5 * sol.rhoPlus * sol.rhoPlus).epsilon(1e-15));
    CHECK(sol.aBar == doctest::Approx(0.0065518534855222).epsilon(1e-12));
    CHECK(sol.slopeShift == 0.0);
}

TEST_CASE("scalar solution scales as the cube root of the cost") {
    const OneDimSolution base = solve_1d_closed_form(1.0, 1.0, 0.001, 0.001);
    const OneDimSolution scaled = solve_1d_closed_form(1.0, 1.0, 0.008, 0.008);
    CHECK(scaled.rhoPlus == doctest::Approx(2.0 * base.rhoPlus).epsilon(1e-14));
    CHECK(scaled.aBar == doctest::Approx(4.0 * base.aBar).epsilon(1e-14));
}

TEST_CASE("value, slope and curvature paste at the free boundary") {
    for (auto costs : {std::pair{0.001, 0.001}, std::pair{0.0005, 0.002}}) {
        const OneDimSolution sol = solve_1d_closed_form(1.3, 0.7, costs.first, costs.second);
        const double b = sol.rhoPlus;
        const double eps = 1e-9 * std::max(1.0, b);

        CHECK(std::abs(sol.value(b + eps) - sol.value(b - eps)) <= 1e-11);
        CHECK(std::abs(sol.value(-b - eps) - sol.value(-b + eps)) <= 1e-11);
        CHECK(sol.derivative(b) == doctest::Approx(costs.second).epsilon(1e-9));
        CHECK(sol.derivative(-b - eps) == doctest::Approx(-costs.first).epsilon(1e-9));
        CHECK(std::abs(sol.second_derivative(b * (1.0 - 1e-12))) <= 1e-9);
    }
}

TEST_CASE("scalar solution satisfies the interior equation identically") {
    const OneDimSolution sol = solve_1d_closed_form(1.3, 0.7, 0.0005, 0.002);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> inside(-sol.rhoPlus, sol.rhoPlus);
    for (int i = 0; i < 100; ++i) {
        const double rho = inside(rng);
        const double residual = sol.aBar - 0.5 * sol.sigma * sol.sigma * rho * rho -
                                0.5 * sol.alphaBar * sol.alphaBar * sol.second_derivative(rho);
        CHECK(std::abs(residual) <= 1e-12);
    }
    // Outside, the slope sits exactly on the transfer constraint.
    CHECK(sol.derivative(2.0 * sol.rhoPlus) == doctest::Approx(0.002));
    CHECK(sol.derivative(-2.0 * sol.rhoPlus) == doctest::Approx(-0.0005));
}

TEST_CASE("asymmetric costs shift the slope but not the boundary") {
    const OneDimSolution sym = solve_1d_closed_form(1.0, 1.0, 0.001, 0.001);
    const OneDimSolution asym = solve_1d_closed_form(1.0, 1.0, 0.0, 0.002);
    CHECK(asym.rhoPlus == doctest::Approx(sym.rhoPlus).epsilon(1e-14));
    CHECK(asym.aBar == doctest::Approx(sym.aBar).epsilon(1e-14));
    CHECK(asym.slopeShift == doctest::Approx(0.001).epsilon(1e-14));
    // The potential is no longer even.
    CHECK(asym.value(0.05) != doctest::Approx(asym.value(-0.05)));
}

TEST_CASE("zero costs collapse the solution") {
    const OneDimSolution sol = solve_1d_closed_form(1.0, 1.0, 0.0, 0.0);
    CHECK(sol.rhoPlus == 0.0);
    CHECK(sol.aBar == 0.0);
    CHECK(sol.value(0.3) == 0.0);
    CHECK(sol.value(-0.7) == 0.0);
}

TEST_CASE("degenerate scalar inputs are rejected") {
    CHECK_THROWS_AS(solve_1d_closed_form(0.0, 1.0, 0.001, 0.001), Error);
    CHECK_THROWS_AS(solve_1d_closed_form(1.0, 0.0, 0.001, 0.001), Error);
    CHECK_THROWS_AS(solve_1d_closed_form(1.0, 1.0, -0.001, 0.001), Error);
    CHECK_THROWS_AS(solve_1d_closed_form(1.0, 1.0, kInf, 0.001), Error);
}

TEST_CASE("separable reference sums independent axes") {
    const CorrectorProblem problem = separable_problem();
    const SeparableSolution sol = separable_solution(problem);
    REQUIRE(sol.axes.size() == 2);
    const OneDimSolution axis1 = solve_1d_closed_form(1.0, 1.0, 0.001, 0.001);
    const OneDimSolution axis2 = solve_1d_closed_form(1.0, 1.0, 0.002, 0.002);
    CHECK(sol.aHat == doctest::Approx(axis1.aBar + axis2.aBar).epsilon(1e-14));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coord(-0.1, 0.1);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd rho(2);
        rho << coord(rng), coord(rng);
        CHECK(sol.value(rho) ==
              doctest::Approx(axis1.value(rho(0)) + axis2.value(rho(1))).epsilon(1e-12));
        // Inside the product box the sum solves the two-dimensional equation.
        if (std::abs(rho(0)) < axis1.rhoPlus && std::abs(rho(1)) < axis2.rhoPlus) {
            const double residual = sol.aHat - 0.5 * rho.squaredNorm() -
                                    0.5 * (axis1.second_derivative(rho(0)) +
                                           axis2.second_derivative(rho(1)));
            CHECK(std::abs(residual) <= 1e-10);
        }
    }
}

TEST_CASE("separable reference rejects coupled problems") {
    CorrectorProblem offDiag = separable_problem();
    offDiag.sigmaEff(0, 1) = 0.25;
    CHECK_THROWS_AS(separable_solution(offDiag), Error);

    CorrectorProblem swaps = separable_problem();
    swaps.lambda(1, 2) = 0.001;
    swaps.lambda(2, 1) = 0.001;
    CHECK_THROWS_AS(separable_solution(swaps), Error);

    CorrectorProblem noCashLeg = separable_problem();
    noCashLeg.lambda(0, 1) = kInf;
    CHECK_THROWS_AS(separable_solution(noCashLeg), Error);
}
