#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "corrector/config.hpp"
#include "corrector/errors.hpp"
#include "corrector/oracles.hpp"
#include "corrector/runner.hpp"

namespace {

int env_threads() {
    const char* raw = std::getenv("CORRECTOR_THREADS");
    if (!raw || !*raw) return 0;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (*end != '\0' || v < 0) {
        throw corrector::Error(corrector::Errc::ConfigError,
                               std::string("CORRECTOR_THREADS must be a nonnegative integer, "
                                           "got '") +
                                   raw + "'");
    }
    return static_cast<int>(v);
}

corrector::ExperimentConfig resolve_target(const std::string& target) {
    for (const auto& preset : corrector::preset_descriptions()) {
        if (preset.first == target) return corrector::preset_config(target);
    }
    return corrector::parse_config_file(target);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-difference solver for the ergodic corrector equation of "
                 "small-transaction-cost portfolio optimisation"};
    app.require_subcommand(1);

    std::string target;
    std::string outDir;
    std::string mode;
    bool check = false;
    std::uint64_t seed = 0;

    CLI::App* solve = app.add_subcommand("solve", "solve a config file or built-in preset");
    solve->add_option("target", target, "config file path or preset name")->required();
    solve->add_option("--out", outDir, "output directory (overrides the config)");
    solve->add_flag("--check", check, "run the invariant suite on the solution");
    CLI::Option* seedOption =
        solve->add_option("--seed", seed, "simulation seed (overrides the config)");
    solve->add_option("--mode", mode, "policy-iteration, discounted or both");

    CLI::App* presets = app.add_subcommand("presets", "list built-in experiments");

    double oracleSigma = 0.0;
    double oracleAlpha = 0.0;
    double oracleL01 = 0.0;
    double oracleL10 = 0.0;
    CLI::App* oracle =
        app.add_subcommand("oracle1d", "print the closed-form single-asset solution");
    oracle->add_option("--sigma", oracleSigma, "effective volatility")->required();
    oracle->add_option("--alpha", oracleAlpha, "effective diffusion")->required();
    oracle->add_option("--l01", oracleL01, "cost of moving cash into the asset")->required();
    oracle->add_option("--l10", oracleL10, "cost of moving the asset into cash")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (presets->parsed()) {
            for (const auto& preset : corrector::preset_descriptions()) {
                std::printf("%-28s %s\n", preset.first.c_str(), preset.second.c_str());
            }
            return 0;
        }
        if (oracle->parsed()) {
            const corrector::OneDimSolution sol =
                corrector::solve_1d_closed_form(oracleSigma, oracleAlpha, oracleL01, oracleL10);
            std::printf("rho_plus = %.17g\n", sol.rhoPlus);
            std::printf("a_bar = %.17g\n", sol.aBar);
            std::printf("slope_shift = %.17g\n", sol.slopeShift);
            std::printf("w(rho_plus) = %.17g\n", sol.value(sol.rhoPlus));
            return 0;
        }

        corrector::ExperimentConfig config = resolve_target(target);
        corrector::RunOverrides overrides;
        overrides.outDir = outDir;
        overrides.mode = mode;
        overrides.check = check;
        overrides.haveSeed = seedOption->count() > 0;
        overrides.seed = seed;
        overrides.threads = env_threads();

        const corrector::RunArtifacts artifacts = corrector::run_experiment(config, overrides);
        std::fputs(artifacts.summary.c_str(), stdout);
        return 0;
    } catch (const corrector::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
