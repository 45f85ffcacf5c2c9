#include "doctest.h"

#include <cmath>
#include <random>

#include "corrector/market.hpp"

using namespace corrector;

namespace {

MarketParams scalar_market(double excess, double sigma, double r, double beta, double p) {
    MarketParams params;
    params.d = 1;
    params.mu = Eigen::VectorXd::Constant(1, r + excess);
    params.r = r;
    params.sigma = Eigen::MatrixXd::Constant(1, 1, sigma);
    params.beta = beta;
    params.p = p;
    params.lambda = Eigen::MatrixXd::Zero(2, 2);
    params.epsilon = 0.1;
    return params;
}

// Plugs the candidate controls into the dynamic programming equation of the
// frictionless problem and returns the relative residual at wealth z.
double hjb_residual(const MarketParams& params, const MertonSolution& merton, double z) {
    const double p = params.p;
    const double v = merton.vK * std::pow(z, p) / p;
    const double vz = merton.vK * std::pow(z, p - 1.0);
    const double vzz = (p - 1.0) * merton.vK * std::pow(z, p - 2.0);
    const Eigen::VectorXd y = merton.pi * z;
    const Eigen::VectorXd excess = params.mu - params.r * Eigen::VectorXd::Ones(params.d);
    const double c = merton.c0 * z;
    const double diffusion = 0.5 * (params.sigma.transpose() * y).squaredNorm() * vzz;
    const double drift = (params.r * z + y.dot(excess) - c) * vz;
    const double utility = std::pow(c, p) / p;
    return std::abs(params.beta * v - diffusion - drift - utility) / std::abs(params.beta * v);
}

}  // namespace

TEST_CASE("frictionless solution for the reference scalar market") {
    const MarketParams params = scalar_market(0.05, 0.2, 0.03, 0.1, 0.5);
    const MertonSolution merton = solve_merton(params);

    CHECK(merton.pi(0) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(merton.sigmaTpiSq == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(merton.kappa1 == doctest::Approx(0.0925).epsilon(1e-14));
    CHECK(merton.c0 == doctest::Approx(0.1075).epsilon(1e-14));
    CHECK(merton.vK == doctest::Approx(1.0 / std::sqrt(0.1075)).epsilon(1e-14));
    CHECK(merton.eta_factor() == doctest::Approx(2.0));
}

TEST_CASE("candidate controls satisfy the dynamic programming equation") {
    const MarketParams params = scalar_market(0.05, 0.2, 0.03, 0.1, 0.5);
    const MertonSolution merton = solve_merton(params);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> wealth(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
        CHECK(hjb_residual(params, merton, wealth(rng)) <= 1e-10);
    }
}

TEST_CASE("dynamic programming equation holds for a correlated two-asset market") {
    MarketParams params;
    params.d = 2;
    params.r = 0.02;
    params.beta = 0.1;
    params.p = 0.5;
    params.epsilon = 0.1;
    params.sigma = Eigen::MatrixXd(2, 2);
    params.sigma << 1.0, -0.25, -0.25, 1.0;
    params.mu = Eigen::VectorXd(2);
    params.mu << 0.04, 0.05;
    params.lambda = Eigen::MatrixXd::Zero(3, 3);
    const MertonSolution merton = solve_merton(params);

    const Eigen::VectorXd excess = params.mu - params.r * Eigen::VectorXd::Ones(2);
    const Eigen::VectorXd foc =
        (1.0 - params.p) * params.sigma * params.sigma.transpose() * merton.pi - excess;
    CHECK(foc.cwiseAbs().maxCoeff() <= 1e-14);
    for (double z : {0.5, 1.0, 2.0}) {
        CHECK(hjb_residual(params, merton, z) <= 1e-10);
    }
}

TEST_CASE("effective diffusion of the deviation process") {
    const MarketParams params = scalar_market(0.05, 0.2, 0.03, 0.1, 0.5);
    const MertonSolution merton = solve_merton(params);
    const Eigen::MatrixXd alphaBar = effective_diffusion(merton, params.sigma);
    CHECK(alphaBar(0, 0) == doctest::Approx(-0.375).epsilon(1e-14));
}

TEST_CASE("effective diffusion rejects a portfolio summing to one") {
    // pi = 1 makes (I - pi 1^T) diag(pi) sigma vanish.
    MarketParams params = scalar_market(0.05, 0.2, 0.03, 0.1, 0.5);
    params.mu(0) = params.r + 0.5 * 0.04;  // excess = (1-p) sigma^2 pi with pi = 1
    const MertonSolution merton = solve_merton(params);
    CHECK(merton.pi(0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(effective_diffusion(merton, params.sigma), Error);
}

TEST_CASE("second corrector coefficient and the linear-operator identity") {
    const MarketParams params = scalar_market(0.05, 0.2, 0.03, 0.1, 0.5);
    const MertonSolution merton = solve_merton(params);
    const double aBar = 0.0065522;
    const SecondCorrector second = second_corrector_value(merton, aBar);

    // For power utility kappa2 collapses to the consumption rate.
    CHECK(second.kappa2 == doctest::Approx(merton.c0).epsilon(1e-14));

    const double p = params.p;
    const Eigen::VectorXd excess = params.mu - params.r * Eigen::VectorXd::Ones(1);
    for (double z : {0.5, 1.0, 2.0}) {
        const double h = 1e-5 * z;
        auto u = [&](double zz) { return second.u0 * std::pow(zz, p); };
        const double uz = (u(z + h) - u(z - h)) / (2.0 * h);
        const double uzz = (u(z + h) - 2.0 * u(z) + u(z - h)) / (h * h);
        const double y = merton.pi(0) * z;
        const double drift = params.r * z + y * excess(0) - merton.c0 * z;
        const double applied = params.beta * u(z) -
                               0.5 * params.sigma(0, 0) * params.sigma(0, 0) * y * y * uzz -
                               drift * uz;
        const double target = merton.vK * std::pow(z, p - 1.0) * (z / (1.0 - p)) * aBar;
        CHECK(std::abs(applied - target) / std::abs(target) <= 1e-6);
    }
}

TEST_CASE("expansion at zero cost scale reproduces the frictionless value") {
    const MarketParams params = scalar_market(0.05, 0.2, 0.03, 0.1, 0.5);
    const MertonSolution merton = solve_merton(params);
    for (double z : {0.5, 1.0, 2.0}) {
        CHECK(expansion_value(merton, 0.0065522, 0.0, z) == merton.value(z));
        CHECK(expansion_value(merton, 0.0065522, 0.1, z) < merton.value(z));
    }
}

TEST_CASE("no-transaction points map to holdings around the frictionless target") {
    const MarketParams params = scalar_market(0.05, 0.2, 0.03, 0.1, 0.5);
    const MertonSolution merton = solve_merton(params);
    Eigen::MatrixXd points(2, 1);
    points << 0.3, -0.3;
    const Eigen::MatrixXd holdings = map_nt_region(merton, 0.1, 2.0, points);
    CHECK(holdings(0, 0) == doctest::Approx(5.0 + 0.1 * 4.0 * 0.3).epsilon(1e-14));
    CHECK(holdings(1, 0) == doctest::Approx(5.0 - 0.1 * 4.0 * 0.3).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(solve_merton(scalar_market(0.05, 0.2, 0.03, 0.1, 0.0)), Error);
    CHECK_THROWS_AS(solve_merton(scalar_market(0.05, 0.2, 0.03, 0.1, 1.0)), Error);
    CHECK_THROWS_AS(solve_merton(scalar_market(0.05, 0.0, 0.03, 0.1, 0.5)), Error);
    // Discount rate too small for a positive consumption rate.
    CHECK_THROWS_AS(solve_merton(scalar_market(0.05, 0.2, 0.03, 0.04, 0.5)), Error);
}
