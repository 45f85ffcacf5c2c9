#include "doctest.h"

#include <cmath>
#include <string>

#include "corrector/config.hpp"
#include "corrector/errors.hpp"

using namespace corrector;

namespace {

std::string error_message(const std::string& text) {
    try {
        parse_config_text(text, "test.ini");
        return "";
    } catch (const Error& e) {
        return e.what();
    }
}

}  // namespace

TEST_CASE("full config round trip") {
    const std::string text =
        "# two-asset experiment\n"
        "[market]\n"
        "assets = 2\n"
        "mu = 0.03, 0.04\n"
        "r = 0.02\n"
        "sigma = 1.0, -0.25; -0.25, 1.0\n"
        "beta = 0.1\n"
        "p = 0.5\n"
        "lambda = 0, 0.001, 0.001; 0.001, 0, inf; 0.001, inf, 0\n"
        "epsilon = 0.1\n"
        "\n"
        "[solver]\n"
        "radius = auto\n"
        "n = 101\n"
        "tol_a = 1e-8\n"
        "backend = iterative\n"
        "cost_convention = sigma-transpose\n"
        "\n"
        "[run]\n"
        "mode = both\n"
        "eta = 0.01\n"
        "\n"
        "[validation]\n"
        "mc = on\n"
        "mc_horizon = 100\n"
        "mc_paths = 8\n"
        "seed = 9\n"
        "\n"
        "[output]\n"
        "directory = maps\n"
        "image = off\n"
        "scale = 3\n";
    const ExperimentConfig config = parse_config_text(text, "test.ini");

    CHECK(config.hasMarket);
    CHECK(config.market.d == 2);
    CHECK(config.market.mu(1) == doctest::Approx(0.04));
    CHECK(config.market.sigma(0, 1) == doctest::Approx(-0.25));
    CHECK(std::isinf(config.market.lambda(1, 2)));
    CHECK(config.solver.radius == 0.0);
    CHECK(config.solver.n == 101);
    CHECK(config.solver.tolA == doctest::Approx(1e-8));
    CHECK(config.solver.backend == LinearBackend::Iterative);
    CHECK(config.solver.costTranspose);
    CHECK(config.run.mode == RunMode::Both);
    CHECK(config.run.eta == doctest::Approx(0.01));
    CHECK(config.validation.mc);
    CHECK(config.validation.horizon == doctest::Approx(100.0));
    CHECK(config.validation.paths == 8);
    CHECK(config.validation.seed == 9);
    CHECK(config.output.directory == "maps");
    CHECK_FALSE(config.output.image);
    CHECK(config.output.scale == 3);
}

TEST_CASE("direct corrector inputs bypass the market pipeline") {
    const std::string text =
        "[corrector]\n"
        "sigma_eff = 1\n"
        "alpha_bar = 1\n"
        "lambda = 0, 0.001; 0.001, 0\n";
    const ExperimentConfig config = parse_config_text(text, "inline");
    CHECK_FALSE(config.hasMarket);
    CHECK(config.corrector.present);
    CHECK(config.corrector.sigmaEff(0, 0) == doctest::Approx(1.0));
    CHECK(config.corrector.lambda(0, 1) == doctest::Approx(0.001));
}

TEST_CASE("diagnostics carry the source name and line number") {
    CHECK(error_message("[market]\nassets = 2\nbogus = 1\n").find("test.ini:3") !=
          std::string::npos);
    CHECK(error_message("[market]\nassets = 2\nbogus = 1\n").find("bogus") !=
          std::string::npos);
    CHECK(error_message("[nowhere]\n").find("unknown section") != std::string::npos);
    CHECK(error_message("key = 1\n").find("before any section") != std::string::npos);
    CHECK(error_message("[solver]\nn 101\n").find("expected key = value") != std::string::npos);
    CHECK(error_message("[solver]\nn = \n").find("no value") != std::string::npos);
    CHECK(error_message("[solver]\nn = five\n").find("cannot parse number") !=
          std::string::npos);
    CHECK(error_message("[solver]\nbackend = qr\n").find("backend") != std::string::npos);
    CHECK(error_message("[corrector]\nsigma_eff = 1\n").find("needs sigma_eff, alpha_bar") !=
          std::string::npos);
    CHECK(error_message("[market]\nassets = 2\n").find("missing key") != std::string::npos);
    CHECK(error_message("[corrector]\nsigma_eff = 1, 0; 0\nalpha_bar = 1\nlambda = 0\n")
              .find("unequal") != std::string::npos);
    CHECK(error_message("").find("neither") != std::string::npos);
}

TEST_CASE("dimension checks run after parsing") {
    const std::string text =
        "[market]\n"
        "assets = 2\n"
        "mu = 0.03\n"
        "r = 0.02\n"
        "sigma = 1, 0; 0, 1\n"
        "beta = 0.1\n"
        "p = 0.5\n"
        "lambda = 0, 0.001, 0.001; 0.001, 0, inf; 0.001, inf, 0\n"
        "epsilon = 0.1\n";
    CHECK(error_message(text).find("mu length") != std::string::npos);
}

TEST_CASE("every preset parses into a solvable description") {
    const auto& presets = preset_descriptions();
    CHECK(presets.size() == 9);
    for (const auto& entry : presets) {
        const ExperimentConfig config = preset_config(entry.first);
        CHECK(config.name == entry.first);
        CHECK((config.hasMarket || config.corrector.present));
        CHECK_FALSE(entry.second.empty());
    }
    CHECK_THROWS_AS(preset_config("no-such-preset"), Error);
}

TEST_CASE("gallery presets reverse-engineer the drift for a common target holding") {
    const ExperimentConfig config = preset_config("fig-uncorrelated");
    REQUIRE(config.hasMarket);
    const MarketParams& market = config.market;
    // mu was chosen so the frictionless optimum is exactly 0.02 per asset.
    const Eigen::VectorXd excess = market.mu - market.r * Eigen::VectorXd::Ones(2);
    const Eigen::VectorXd pi =
        (market.sigma * market.sigma.transpose()).ldlt().solve(excess) / (1.0 - market.p);
    CHECK(pi(0) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(pi(1) == doctest::Approx(0.02).epsilon(1e-12));

    const ExperimentConfig oneD = preset_config("oracle-1d");
    CHECK(oneD.corrector.present);
    CHECK(oneD.solver.n == 141);
}
