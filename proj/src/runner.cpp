#include "corrector/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "corrector/errors.hpp"
#include "corrector/invariants.hpp"
#include "corrector/market.hpp"
#include "corrector/monte_carlo.hpp"
#include "corrector/oracles.hpp"
#include "corrector/regions.hpp"
#include "corrector/solver.hpp"

namespace corrector {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_matrix(const Eigen::MatrixXd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out += "; ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += fmt(m(i, j));
        }
    }
    return out;
}

RunMode resolve_mode(const ExperimentConfig& config, const RunOverrides& overrides) {
    if (overrides.mode.empty()) return config.run.mode;
    if (overrides.mode == "policy-iteration") return RunMode::PolicyIteration;
    if (overrides.mode == "discounted") return RunMode::Discounted;
    if (overrides.mode == "both") return RunMode::Both;
    throw Error(Errc::ConfigError,
                "mode must be policy-iteration, discounted or both, got '" + overrides.mode +
                    "'");
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config, const RunOverrides& overrides) {
    const RunMode mode = resolve_mode(config, overrides);
    const std::string outDir =
        overrides.outDir.empty() ? config.output.directory : overrides.outDir;

    bool hasMerton = false;
    MertonSolution merton;
    Eigen::MatrixXd sigmaEff;
    Eigen::MatrixXd alphaBar;
    Eigen::MatrixXd lambda;
    if (config.corrector.present) {
        sigmaEff = config.corrector.sigmaEff;
        alphaBar = config.corrector.alphaBar;
        lambda = config.corrector.lambda;
    } else {
        merton = solve_merton(config.market);
        hasMerton = true;
        sigmaEff = config.market.sigma;
        alphaBar = effective_diffusion(merton, config.market.sigma);
        lambda = config.market.lambda;
    }
    if (config.solver.costTranspose) sigmaEff.transposeInPlace();

    const double radius =
        config.solver.radius > 0.0
            ? config.solver.radius
            : default_radius(sigmaEff, alphaBar, lambda, config.solver.margin,
                             config.solver.minRadius);

    CorrectorProblem problem;
    problem.grid = Grid(static_cast<int>(sigmaEff.rows()), config.solver.n, radius);
    problem.sigmaEff = sigmaEff;
    problem.alphaBar = alphaBar;
    problem.lambda = lambda;

    SolverOptions opts;
    opts.tolA = config.solver.tolA;
    opts.tolSwitch = config.solver.tolSwitch;
    opts.maxIters = config.solver.maxIters;
    opts.backend = config.solver.backend;

    RunArtifacts artifacts;
    artifacts.problem = problem;

    std::string summary;
    summary += "experiment = " + config.name + "\n";
    summary += "assets = " + std::to_string(problem.d()) + "\n";
    summary += "grid_n = " + std::to_string(problem.grid.n) + "\n";
    summary += "grid_radius = " + fmt(problem.grid.radius) + "\n";
    summary += "grid_h = " + fmt(problem.grid.h) + "\n";
    summary += "cost_convention = ";
    summary += config.solver.costTranspose ? "sigma-transpose" : "sigma";
    summary += "\n";
    if (hasMerton) {
        summary += "merton_pi = " + fmt_matrix(merton.pi.transpose()) + "\n";
        summary += "merton_c0 = " + fmt(merton.c0) + "\n";
        summary += "effective_diffusion = " + fmt_matrix(alphaBar) + "\n";
    }

    const bool wantErgodic = mode != RunMode::Discounted;
    const bool wantDiscounted = mode != RunMode::PolicyIteration;

    if (wantErgodic) {
        artifacts.solution = solve_policy_iteration(problem, opts);
        summary += "a_bar = " + fmt(artifacts.solution.aBar) + "\n";
        summary += "iterations = " + std::to_string(artifacts.solution.iterations) + "\n";
        summary += "residual = " + fmt(artifacts.solution.residualNorm) + "\n";
        summary += "tol_bind = " + fmt(artifacts.solution.tolBind) + "\n";
        summary += "monotone_stencil = ";
        summary += artifacts.solution.monotoneStencil ? "yes" : "no";
        summary += "\n";
        summary += "neumann_nodes = " + std::to_string(artifacts.solution.neumannNodes) + "\n";
    }
    if (wantDiscounted) {
        artifacts.hasDiscounted = true;
        artifacts.discounted = solve_discounted(problem, config.run.eta, opts);
        summary += "discount_eta = " + fmt(config.run.eta) + "\n";
        summary += "discount_a_estimate = " + fmt(artifacts.discounted.aBar) + "\n";
        summary +=
            "discount_iterations = " + std::to_string(artifacts.discounted.iterations) + "\n";
        if (wantErgodic && artifacts.solution.aBar != 0.0) {
            summary += "discount_relative_gap = " +
                       fmt(std::abs(artifacts.discounted.aBar - artifacts.solution.aBar) /
                           std::abs(artifacts.solution.aBar)) +
                       "\n";
        }
        if (!wantErgodic) artifacts.solution = artifacts.discounted;
    }

    try {
        const SeparableSolution oracle = separable_solution(problem);
        summary += "oracle_a_hat = " + fmt(oracle.aHat) + "\n";
        std::string bounds;
        for (std::size_t a = 0; a < oracle.axes.size(); ++a) {
            if (a) bounds += ", ";
            bounds += fmt(oracle.axes[a].rhoPlus);
        }
        summary += "oracle_rho_plus = " + bounds + "\n";
        if (oracle.aHat != 0.0) {
            summary += "oracle_relative_gap = " +
                       fmt(std::abs(artifacts.solution.aBar - oracle.aHat) / oracle.aHat) + "\n";
        }
    } catch (const Error& err) {
        if (err.code() != Errc::InapplicableStructure) throw;
    }

    if (hasMerton) {
        const SecondCorrector expansion = second_corrector_value(merton, artifacts.solution.aBar);
        summary += "kappa2 = " + fmt(expansion.kappa2) + "\n";
        summary += "u0 = " + fmt(expansion.u0) + "\n";
    }

    const RegionMap map = classify_regions(artifacts.solution);
    summary += "nt_cells = " + std::to_string(map.ntCells) + "\n";

    std::error_code fsError;
    std::filesystem::create_directories(outDir, fsError);
    if (fsError) {
        throw Error(Errc::IoError, "cannot create output directory " + outDir);
    }
    if (config.output.csv) {
        const std::string path = outDir + "/regions.csv";
        emit_csv(map, path);
        summary += "csv = " + path + "\n";
    }
    if (config.output.image) {
        if (problem.d() == 2) {
            const std::string path = outDir + "/regions.ppm";
            emit_image(map, path, config.output.scale);
            summary += "image = " + path + "\n";
        } else {
            summary += "image = skipped (needs exactly two assets)\n";
        }
    }

    if (config.validation.mc) {
        McOptions mcOpts;
        mcOpts.horizon = config.validation.horizon;
        mcOpts.dt = config.validation.dt;
        mcOpts.paths = config.validation.paths;
        mcOpts.seed = overrides.haveSeed ? overrides.seed : config.validation.seed;
        mcOpts.threads = overrides.threads;
        const McResult mc = mc_ergodic_cost(artifacts.solution, problem, mcOpts);
        summary += "mc_estimate = " + fmt(mc.estimate) + "\n";
        summary += "mc_stderr = " + fmt(mc.stderrEstimate) + "\n";
        summary += "mc_escapes = " + std::to_string(mc.escapes) + "\n";
        if (artifacts.solution.aBar != 0.0) {
            summary += "mc_relative_gap = " +
                       fmt(std::abs(mc.estimate - artifacts.solution.aBar) /
                           std::abs(artifacts.solution.aBar)) +
                       "\n";
        }
    }

    bool invariantsOk = true;
    if (overrides.check) {
        InvariantReport report = check_invariants(problem, artifacts.solution);
        if (artifacts.hasDiscounted && wantErgodic) {
            const InvariantReport extra = check_invariants(problem, artifacts.discounted);
            report.items.insert(report.items.end(), extra.items.begin(), extra.items.end());
        }
        invariantsOk = report.all_pass();
        summary += "invariants = ";
        summary += invariantsOk ? "pass" : "FAIL";
        summary += "\n";
        summary += report.to_text();
    }

    {
        const std::string path = outDir + "/summary.txt";
        std::ofstream file(path, std::ios::binary);
        if (!file ||
            !file.write(summary.data(), static_cast<std::streamsize>(summary.size()))) {
            throw Error(Errc::IoError, "cannot write " + path);
        }
    }
    artifacts.summary = summary;

    if (!invariantsOk) {
        throw Error(Errc::NonConvergence, "invariant check failed; see " + outDir +
                                              "/summary.txt for the report");
    }
    return artifacts;
}

}  // namespace corrector
