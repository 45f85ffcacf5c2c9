#pragma once

#include <Eigen/Dense>
#include <vector>

#include "corrector/problem.hpp"

namespace corrector {

// Closed-form scalar solution. Inside [-rhoPlus, rhoPlus]:
//   w(rho) = (aBar rho^2 - sigma^2 rho^4 / 12) / alphaBar^2 + C rho,
// linear outside with slopes lambda10 and -lambda01, where
//   rhoPlus = (3 alphaBar^2 (lambda10 + lambda01) / (4 sigma^2))^{1/3},
//   aBar = sigma^2 rhoPlus^2 / 2,  C = (lambda10 - lambda01) / 2.
// The coefficients follow from integrating w'' = (2 aBar - sigma^2 rho^2) /
// alphaBar^2 and pasting value, slope and curvature at the free boundary;
// the pasting identities are re-checked by the unit tests.
struct OneDimSolution {
    double sigma = 0.0;
    double alphaBar = 0.0;
    double lambda01 = 0.0;
    double lambda10 = 0.0;
    double rhoPlus = 0.0;
    double aBar = 0.0;
    double slopeShift = 0.0;  // C

    double value(double rho) const;
    double derivative(double rho) const;
    double second_derivative(double rho) const;
};

OneDimSolution solve_1d_closed_form(double sigmaEff, double alphaBar, double lambda01,
                                    double lambda10);

// Sum of independent axis solutions: valid when sigmaEff and alphaBar are
// diagonal and only cash transfers are allowed, so the equation decouples.
struct SeparableSolution {
    std::vector<OneDimSolution> axes;
    double aHat = 0.0;

    double value(const Eigen::VectorXd& rho) const;
};

SeparableSolution separable_solution(const std::vector<OneDimSolution>& perAxis);

// Builds the per-axis solutions from a problem, throwing
// InapplicableStructure unless sigmaEff and alphaBar are diagonal and every
// asset-asset cost is infinite while both cash costs per axis are finite.
SeparableSolution separable_solution(const CorrectorProblem& problem);

}  // namespace corrector
