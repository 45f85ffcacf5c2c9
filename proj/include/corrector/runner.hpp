#pragma once

#include <cstdint>
#include <string>

#include "corrector/config.hpp"
#include "corrector/problem.hpp"

namespace corrector {

// Command-line overrides applied on top of a parsed config.
struct RunOverrides {
    std::string outDir;  // empty keeps the configured directory
    std::string mode;    // empty keeps the configured mode
    bool check = false;  // run the invariant suite after solving
    bool haveSeed = false;
    std::uint64_t seed = 0;
    int threads = 0;  // simulation worker threads, 0 = hardware count
};

struct RunArtifacts {
    CorrectorProblem problem;
    CorrectorSolution solution;  // drives the emitted map
    bool hasDiscounted = false;
    CorrectorSolution discounted;
    std::string summary;  // contents of summary.txt
};

// Full pipeline: derive the corrector inputs, solve in the requested mode,
// classify the converged policy, emit regions.csv / regions.ppm / summary.txt
// into the output directory, optionally cross-check with simulation and the
// invariant suite. Throws Error on any failure; artifacts written so far are
// left in place for inspection.
RunArtifacts run_experiment(const ExperimentConfig& config, const RunOverrides& overrides);

}  // namespace corrector
