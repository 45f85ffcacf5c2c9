#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "corrector/market.hpp"
#include "corrector/problem.hpp"

namespace corrector {

enum class RunMode { PolicyIteration, Discounted, Both };

struct SolverBlock {
    double radius = 0.0;  // 0 = derive from the problem scale
    int n = 201;
    double tolA = 1e-9;
    double tolSwitch = 1e-10;
    int maxIters = 500;
    LinearBackend backend = LinearBackend::Auto;
    bool costTranspose = false;  // running cost from sigma^T rho instead of sigma rho
    double minRadius = 1e-3;
    double margin = 3.0;
};

struct RunBlock {
    RunMode mode = RunMode::PolicyIteration;
    double eta = 1e-3;
};

struct ValidationBlock {
    bool mc = false;
    double horizon = 2e4;
    double dt = 1e-3;
    int paths = 16;
    std::uint64_t seed = 1;
};

struct OutputBlock {
    std::string directory = "out";
    bool csv = true;
    bool image = true;
    int scale = 2;
};

// Direct statement of the corrector inputs, bypassing the frictionless
// pipeline; used when the effective coefficients are the object of study.
struct CorrectorOverride {
    bool present = false;
    Eigen::MatrixXd sigmaEff;
    Eigen::MatrixXd alphaBar;
    Eigen::MatrixXd lambda;
};

struct ExperimentConfig {
    std::string name = "custom";
    bool hasMarket = false;
    MarketParams market;
    CorrectorOverride corrector;
    SolverBlock solver;
    RunBlock run;
    ValidationBlock validation;
    OutputBlock output;
};

// INI-style text: [section] headers, key = value lines, '#' comments.
// Matrices separate rows with ';' and entries with ','; "inf" is accepted
// where a cost may be infinite. Unknown sections or keys are rejected with
// the offending line number.
ExperimentConfig parse_config_text(const std::string& text, const std::string& sourceName);
ExperimentConfig parse_config_file(const std::string& path);

// Built-in experiments, name -> one-line description.
const std::vector<std::pair<std::string, std::string>>& preset_descriptions();
ExperimentConfig preset_config(const std::string& name);

}  // namespace corrector
